#include "collapse/level_sets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "collapse/entropy.hpp"
#include "collapse/errors.hpp"

namespace collapse {

namespace {

using NodeId = std::int64_t;

// Edge ids: horizontal edge (j,k)-(j,k+1) is 2*(j*n+k); vertical edge
// (j,k)-(j+1,k) is 2*(j*n+k)+1.
NodeId horizontal_edge(int n, int j, int k) { return 2 * (static_cast<NodeId>(j) * n + k); }
NodeId vertical_edge(int n, int j, int k) { return 2 * (static_cast<NodeId>(j) * n + k) + 1; }

struct Segment {
  NodeId a;
  NodeId b;
  std::int64_t cell;
};

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // Smaller index becomes the root so labels follow discovery order.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Grid {
  int n;
  double step;
  std::vector<double> values;  // row-major, theta index major

  [[nodiscard]] double at(int j, int k) const { return values[static_cast<std::size_t>(j) * n + k]; }
  [[nodiscard]] double coord(int idx) const { return idx == n - 1 ? kPi : idx * step; }
};

Grid sample_grid(const OverlapField& field, int n) {
  Grid g{n, kPi / (n - 1), {}};
  g.values.resize(static_cast<std::size_t>(n) * n);
  std::vector<double> cos_t(n), sin_t(n), cos_p(n);
  for (int j = 0; j < n; ++j) {
    const double t = g.coord(j);
    cos_t[j] = std::cos(t);
    sin_t[j] = std::sin(t);
    cos_p[j] = std::cos(t - field.tau);
  }
  for (int j = 0; j < n; ++j) {
    const double base = 0.5 + field.half_minus_rho * cos_t[j];
    const double amp = field.amplitude * sin_t[j];
    double* row = g.values.data() + static_cast<std::size_t>(j) * n;
    for (int k = 0; k < n; ++k) row[k] = base + amp * cos_p[k];
  }
  return g;
}

struct Point {
  double theta;
  double phi;
};

Point edge_point(const Grid& g, NodeId id, double level) {
  const bool vertical = (id & 1) != 0;
  const NodeId base = id >> 1;
  const int j = static_cast<int>(base / g.n);
  const int k = static_cast<int>(base % g.n);
  const double v0 = g.at(j, k);
  const double v1 = vertical ? g.at(j + 1, k) : g.at(j, k + 1);
  const double t = v1 == v0 ? 0.5 : std::clamp((level - v0) / (v1 - v0), 0.0, 1.0);
  if (vertical) return {g.coord(j) + t * (g.coord(j + 1) - g.coord(j)), g.coord(k)};
  return {g.coord(j), g.coord(k) + t * (g.coord(k + 1) - g.coord(k))};
}

GridEdge boundary_of(int n, NodeId id) {
  const bool vertical = (id & 1) != 0;
  const NodeId base = id >> 1;
  const int j = static_cast<int>(base / n);
  const int k = static_cast<int>(base % n);
  if (vertical) {
    if (k == 0) return GridEdge::phi_low;
    if (k == n - 1) return GridEdge::phi_high;
  } else {
    if (j == 0) return GridEdge::theta_low;
    if (j == n - 1) return GridEdge::theta_high;
  }
  return GridEdge::none;
}

// Marching squares for one level. Corner order: c0=(j,k) c1=(j,k+1)
// c2=(j+1,k+1) c3=(j+1,k); cell edges e0 top, e1 right, e2 bottom, e3 left.
std::vector<Segment> march(const Grid& g, double level) {
  std::vector<Segment> segments;
  const int n = g.n;
  for (int j = 0; j + 1 < n; ++j) {
    for (int k = 0; k + 1 < n; ++k) {
      const double v0 = g.at(j, k);
      const double v1 = g.at(j, k + 1);
      const double v2 = g.at(j + 1, k + 1);
      const double v3 = g.at(j + 1, k);
      const int code = (v0 > level ? 1 : 0) | (v1 > level ? 2 : 0) | (v2 > level ? 4 : 0) | (v3 > level ? 8 : 0);
      if (code == 0 || code == 15) continue;

      const std::array<NodeId, 4> e = {horizontal_edge(n, j, k), vertical_edge(n, j, k + 1),
                                       horizontal_edge(n, j + 1, k), vertical_edge(n, j, k)};
      const std::int64_t cell = static_cast<std::int64_t>(j) * (n - 1) + k;
      auto emit = [&](int a, int b) { segments.push_back({e[a], e[b], cell}); };

      switch (code) {
        case 1: case 14: emit(3, 0); break;
        case 2: case 13: emit(0, 1); break;
        case 3: case 12: emit(3, 1); break;
        case 4: case 11: emit(1, 2); break;
        case 6: case 9: emit(0, 2); break;
        case 7: case 8: emit(3, 2); break;
        case 5: case 10: {
          const bool centre_in = 0.25 * (v0 + v1 + v2 + v3) > level;
          // centre joins the two inside corners when it is inside itself
          const bool isolate_c0_c2 = (code == 5) != centre_in;
          if (isolate_c0_c2) {
            emit(3, 0);
            emit(1, 2);
          } else {
            emit(0, 1);
            emit(2, 3);
          }
          break;
        }
        default: break;
      }
    }
  }
  return segments;
}

struct Polyline {
  std::vector<NodeId> nodes;
  std::vector<std::int64_t> cells;
  bool closed = false;
};

std::vector<Polyline> link_segments(const std::vector<Segment>& segments) {
  std::vector<NodeId> ids;
  ids.reserve(segments.size() * 2);
  for (const auto& s : segments) {
    ids.push_back(s.a);
    ids.push_back(s.b);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto index_of = [&](NodeId id) {
    return static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  // Per node: up to two incident segment indices.
  std::vector<std::array<std::size_t, 2>> incident(ids.size(), {kNone, kNone});
  for (std::size_t si = 0; si < segments.size(); ++si) {
    for (NodeId end : {segments[si].a, segments[si].b}) {
      auto& slot = incident[index_of(end)];
      if (slot[0] == kNone) {
        slot[0] = si;
      } else if (slot[1] == kNone) {
        slot[1] = si;
      } else {
        throw SolverError("marching squares produced a node of degree > 2");
      }
    }
  }

  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> out;

  auto walk = [&](std::size_t start_node, bool closed) {
    Polyline pl;
    pl.closed = closed;
    std::size_t node = start_node;
    pl.nodes.push_back(ids[node]);
    while (true) {
      std::size_t next_seg = kNone;
      for (std::size_t s : incident[node]) {
        if (s != kNone && !used[s]) {
          next_seg = s;
          break;
        }
      }
      if (next_seg == kNone) break;
      used[next_seg] = true;
      pl.cells.push_back(segments[next_seg].cell);
      const NodeId other = segments[next_seg].a == ids[node] ? segments[next_seg].b : segments[next_seg].a;
      node = index_of(other);
      if (closed && node == start_node) break;
      pl.nodes.push_back(ids[node]);
    }
    out.push_back(std::move(pl));
  };

  for (std::size_t i = 0; i < ids.size(); ++i) {
    const bool open_end = incident[i][1] == kNone;
    if (open_end && !used[incident[i][0]]) walk(i, false);
  }
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (!used[incident[i][0]]) walk(i, true);
  }
  return out;
}

}  // namespace

OverlapField::OverlapField(const SpinState& s)
    : half_minus_rho(s.rho() - 0.5), amplitude(std::sqrt(s.rho() * (1.0 - s.rho()))), tau(s.tau()) {}

double OverlapField::value(double theta, double phi) const noexcept {
  return 0.5 + half_minus_rho * std::cos(theta) + amplitude * std::sin(theta) * std::cos(phi - tau);
}

double OverlapField::d_theta(double theta, double phi) const noexcept {
  return -half_minus_rho * std::sin(theta) + amplitude * std::cos(theta) * std::cos(phi - tau);
}

double OverlapField::d_phi(double theta, double phi) const noexcept {
  return -amplitude * std::sin(theta) * std::sin(phi - tau);
}

bool is_zero_entropy(double overlap, double eps_z) {
  const double o = std::clamp(overlap, 0.0, 1.0);
  return std::min(o, 1.0 - o) <= eps_z || binary_entropy(o).value() <= eps_z;
}

std::vector<LevelSetCurve> trace_level_sets(const SpinState& state, std::span<const double> levels,
                                            const SolverConfig& cfg) {
  cfg.validate();
  const OverlapField field(state);
  const Grid grid = sample_grid(field, cfg.grid_n);
  const int n = grid.n;
  const std::size_t cell_count = static_cast<std::size_t>(n - 1) * (n - 1);

  std::vector<Polyline> polylines;
  std::vector<int> level_of;
  for (std::size_t li = 0; li < levels.size(); ++li) {
    auto found = link_segments(march(grid, levels[li]));
    for (auto& pl : found) {
      polylines.push_back(std::move(pl));
      level_of.push_back(static_cast<int>(li));
    }
  }

  // Components: 8-connectivity of crossed cells, per level.
  DisjointSets sets(polylines.size());
  {
    std::vector<std::int32_t> owner(cell_count, -1);
    std::size_t begin = 0;
    while (begin < polylines.size()) {
      std::size_t end = begin;
      while (end < polylines.size() && level_of[end] == level_of[begin]) ++end;
      std::vector<std::int64_t> touched;
      for (std::size_t p = begin; p < end; ++p) {
        for (std::int64_t c : polylines[p].cells) {
          auto& o = owner[static_cast<std::size_t>(c)];
          if (o >= 0) {
            sets.unite(static_cast<std::size_t>(o), p);
          } else {
            o = static_cast<std::int32_t>(p);
            touched.push_back(c);
          }
        }
      }
      for (std::int64_t c : touched) {
        const int j = static_cast<int>(c / (n - 1));
        const int k = static_cast<int>(c % (n - 1));
        const auto self = static_cast<std::size_t>(owner[static_cast<std::size_t>(c)]);
        for (int dj = -1; dj <= 1; ++dj) {
          for (int dk = -1; dk <= 1; ++dk) {
            const int jj = j + dj;
            const int kk = k + dk;
            if ((dj == 0 && dk == 0) || jj < 0 || kk < 0 || jj >= n - 1 || kk >= n - 1) continue;
            const std::int32_t other = owner[static_cast<std::size_t>(jj) * (n - 1) + kk];
            if (other >= 0) sets.unite(self, static_cast<std::size_t>(other));
          }
        }
      }
      for (std::int64_t c : touched) owner[static_cast<std::size_t>(c)] = -1;
      begin = end;
    }
  }

  std::vector<LevelSetCurve> curves;
  curves.reserve(polylines.size());
  for (std::size_t p = 0; p < polylines.size(); ++p) {
    const auto& pl = polylines[p];
    LevelSetCurve curve;
    curve.level_index = level_of[p];
    curve.level = levels[static_cast<std::size_t>(curve.level_index)];
    curve.closed = pl.closed;
    curve.vertices.reserve(pl.nodes.size());
    for (NodeId id : pl.nodes) {
      const Point pt = edge_point(grid, id, curve.level);
      curve.vertices.push_back({pt.theta, pt.phi, 0.0, 0.0});
    }
    if (!pl.closed) {
      curve.start_edge = boundary_of(n, pl.nodes.front());
      curve.end_edge = boundary_of(n, pl.nodes.back());
      curve.touches_boundary = true;
    }
    curves.push_back(std::move(curve));
  }

  if (cfg.identify_boundary) {
    // (theta, 0) and (pi - theta, pi) are antipodal, i.e. the same axis with
    // labels exchanged; join arcs that meet there.
    const double reach = 2.0 * grid.step;
    struct SeamEnd {
      std::size_t curve;
      double theta;
    };
    std::vector<SeamEnd> low, high;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      const auto& cv = curves[c];
      if (cv.closed) continue;
      const std::pair<GridEdge, const CurveVertex*> ends[] = {{cv.start_edge, &cv.vertices.front()},
                                                             {cv.end_edge, &cv.vertices.back()}};
      for (const auto& [edge, v] : ends) {
        if (edge == GridEdge::phi_low) low.push_back({c, v->theta});
        if (edge == GridEdge::phi_high) high.push_back({c, kPi - v->theta});
      }
    }
    for (const auto& a : low) {
      for (const auto& b : high) {
        if (std::abs(a.theta - b.theta) <= reach) sets.unite(a.curve, b.curve);
      }
    }
  }

  std::vector<int> id_of_root(polylines.size(), -1);
  int next_id = 0;
  for (std::size_t p = 0; p < polylines.size(); ++p) {
    const std::size_t root = sets.find(p);
    if (id_of_root[root] < 0) id_of_root[root] = next_id++;
    curves[p].component_id = id_of_root[root];
  }
  return curves;
}

void annotate_curves(std::vector<LevelSetCurve>& curves, const Axis& initial, double eps_z) {
  const BlochVector ni = axis_to_bloch(initial);
  for (auto& curve : curves) {
    curve.contains_zero_entropy = false;
    for (auto& v : curve.vertices) {
      v.overlap = std::clamp(0.5 * (1.0 + bloch_direction(v.theta, v.phi).dot(ni)), 0.0, 1.0);
      v.s_up = binary_entropy(v.overlap).value();
      if (is_zero_entropy(v.overlap, eps_z)) curve.contains_zero_entropy = true;
    }
  }
}

int count_components(std::span<const LevelSetCurve> curves) {
  std::vector<int> ids;
  for (const auto& c : curves) ids.push_back(c.component_id);
  std::sort(ids.begin(), ids.end());
  return static_cast<int>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

}  // namespace collapse

#include "collapse/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "collapse/errors.hpp"
#include "selection.hpp"

namespace collapse {

std::string_view to_string(SolverMethod m) noexcept {
  switch (m) {
    case SolverMethod::grid: return "grid";
    case SolverMethod::closed_form: return "closed";
    case SolverMethod::both: return "both";
  }
  return "both";
}

SolverMethod parse_solver_method(std::string_view text) {
  if (text == "grid") return SolverMethod::grid;
  if (text == "closed" || text == "closed_form") return SolverMethod::closed_form;
  if (text == "both") return SolverMethod::both;
  throw std::invalid_argument("unknown solver method '" + std::string(text) + "' (expected grid|closed|both)");
}

void SolverConfig::validate() const {
  if (grid_n < 64) throw DomainError("SolverConfig: grid_n must be >= 64");
  if (!(eps_trivial > 0.0) || !(eps_z > 0.0) || !(refine_tol > 0.0)) {
    throw DomainError("SolverConfig: tolerances must be positive");
  }
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::normal: return "Normal";
    case Status::death_point: return "DeathPoint";
    case Status::trivial: return "Trivial";
  }
  return "Normal";
}

ConstraintLevels constraint_levels(const Axis& initial, const SpinState& state) noexcept {
  const double p = up_overlap_prob(initial, state);
  return {p, 1.0 - p};
}

namespace detail {

bool is_trivial_instance(double p_same, double eps_trivial) {
  return std::min(p_same, 1.0 - p_same) <= eps_trivial;
}

const Candidate* pick_candidate(std::span<const Candidate> candidates) {
  for (bool boundary : {false, true}) {
    const Candidate* best = nullptr;
    for (const auto& c : candidates) {
      if (!c.retained || c.is_boundary != boundary) continue;
      if (best == nullptr) {
        best = &c;
        continue;
      }
      if (c.s_up < best->s_up - 1e-12) {
        best = &c;
      } else if (std::abs(c.s_up - best->s_up) <= 1e-12) {
        const auto key = [](const Candidate* x) { return std::pair{x->axis.theta(), x->axis.phi()}; };
        if (key(&c) < key(best)) best = &c;
      }
    }
    if (best != nullptr) return best;
  }
  return nullptr;
}

void finish_solution(CollapseSolution& sol, const Axis& initial, const SpinState& state, Status status,
                     const Candidate* chosen) {
  sol.status = status;
  sol.axis_i = initial;
  sol.s_i = binary_entropy(up_overlap_prob(initial, state));
  if (status == Status::normal) {
    sol.axis_f = chosen->axis;
    sol.overlap = axes_up_overlap(sol.axis_f, initial);
    sol.s_up = binary_entropy(sol.overlap);
    sol.s_f = binary_entropy(up_overlap_prob(sol.axis_f, state));
  } else {
    sol.axis_f = initial;
    sol.overlap = 1.0;
    sol.s_up = Entropy(0.0);
    sol.s_f = sol.s_i;
  }
}

}  // namespace detail

namespace {

struct PlanePoint {
  double theta;
  double phi;
};

// Move q onto field == level along the gradient direction (Newton).
PlanePoint project_to_level(const OverlapField& field, double level, PlanePoint q) {
  const double gt = field.d_theta(q.theta, q.phi);
  const double gp = field.d_phi(q.theta, q.phi);
  const double gn = std::hypot(gt, gp);
  if (!(gn > 1e-14)) return q;
  const double dt = gt / gn;
  const double dp = gp / gn;
  double s = 0.0;
  for (int it = 0; it < 40; ++it) {
    const double th = q.theta + s * dt;
    const double ph = q.phi + s * dp;
    const double r = field.value(th, ph) - level;
    if (std::abs(r) < 1e-16) break;
    const double slope = field.d_theta(th, ph) * dt + field.d_phi(th, ph) * dp;
    if (std::abs(slope) < 1e-14) break;
    const double step = r / slope;
    s -= step;
    if (std::abs(step) < 1e-17) break;
  }
  const PlanePoint p{q.theta + s * dt, q.phi + s * dp};
  if (!(std::abs(field.value(p.theta, p.phi) - level) < 1e-10)) return q;
  return p;
}

// Root of field(theta, phi_edge) = level near theta0 on a phi edge.
double refine_on_phi_edge(const OverlapField& field, double level, double phi_edge, double theta0, double reach) {
  double lo = std::max(0.0, theta0 - reach);
  double hi = std::min(kPi, theta0 + reach);
  double flo = field.value(lo, phi_edge) - level;
  const double fhi = field.value(hi, phi_edge) - level;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) return theta0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = field.value(mid, phi_edge) - level;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

struct RefinedPoint {
  PlanePoint where;
  bool is_boundary;
};

class CurveRefiner {
 public:
  CurveRefiner(const LevelSetCurve& curve, const OverlapField& field, const BlochVector& ni, double grid_step,
               double tol)
      : curve_(curve), field_(field), ni_(ni), step_(grid_step), tol_(tol) {}

  [[nodiscard]] double raw_overlap(PlanePoint p) const {
    return 0.5 * (1.0 + bloch_direction(p.theta, p.phi).dot(ni_));
  }

  std::optional<RefinedPoint> refine(int index, ExtremumKind kind) const {
    const int m = static_cast<int>(curve_.vertices.size());
    if (m < 2) return RefinedPoint{to_point(curve_.vertices.front()), curve_.touches_boundary};
    constexpr int kHalfWindow = 2;
    constexpr int kMaxShifts = 16;
    int center = index;
    for (int shift = 0; shift < kMaxShifts; ++shift) {
      int lo = center - kHalfWindow;
      int hi = center + kHalfWindow;
      if (!curve_.closed) {
        lo = std::max(lo, 0);
        hi = std::min(hi, m - 1);
      }
      std::vector<PlanePoint> pts;
      for (int v = lo; v <= hi; ++v) pts.push_back(to_point(curve_.vertices[static_cast<std::size_t>(wrap(v, m))]));
      std::vector<double> arc(pts.size(), 0.0);
      for (std::size_t q = 1; q < pts.size(); ++q) {
        arc[q] = arc[q - 1] + std::hypot(pts[q].theta - pts[q - 1].theta, pts[q].phi - pts[q - 1].phi);
      }
      const double length = arc.back();
      if (!(length > 0.0)) return std::nullopt;

      auto along = [&](double t) {
        std::size_t q = 1;
        while (q + 1 < arc.size() && arc[q] < t) ++q;
        const double span = arc[q] - arc[q - 1];
        const double w = span > 0.0 ? std::clamp((t - arc[q - 1]) / span, 0.0, 1.0) : 0.0;
        return project_to_level(field_, curve_.level,
                                {pts[q - 1].theta + w * (pts[q].theta - pts[q - 1].theta),
                                 pts[q - 1].phi + w * (pts[q].phi - pts[q - 1].phi)});
      };
      const double sign = kind == ExtremumKind::maximum ? -1.0 : 1.0;
      auto objective = [&](double t) { return sign * raw_overlap(along(t)); };

      const double t_best = golden_minimize(objective, 0.0, length);
      const double end_slack = 2.0 * tol_;
      const bool at_lo = t_best <= end_slack;
      const bool at_hi = length - t_best <= end_slack;
      if (at_lo && !curve_.closed && lo == 0) return boundary_point(true);
      if (at_hi && !curve_.closed && hi == m - 1) return boundary_point(false);
      if (at_lo) {
        center = lo;
        continue;
      }
      if (at_hi) {
        center = hi;
        continue;
      }
      return RefinedPoint{along(t_best), false};
    }
    return std::nullopt;
  }

 private:
  static int wrap(int v, int m) { return ((v % m) + m) % m; }
  static PlanePoint to_point(const CurveVertex& v) { return {v.theta, v.phi}; }

  template <typename F>
  double golden_minimize(F&& f, double a, double b) const {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > tol_) {
      if (fc <= fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = f(d);
      }
    }
    return 0.5 * (a + b);
  }

  RefinedPoint boundary_point(bool at_start) const {
    const CurveVertex& v = at_start ? curve_.vertices.front() : curve_.vertices.back();
    const GridEdge edge = at_start ? curve_.start_edge : curve_.end_edge;
    PlanePoint p{v.theta, v.phi};
    if (edge == GridEdge::phi_low || edge == GridEdge::phi_high) {
      const double phi_edge = edge == GridEdge::phi_low ? 0.0 : kPi;
      p = {refine_on_phi_edge(field_, curve_.level, phi_edge, v.theta, 2.0 * step_), phi_edge};
    }
    return {p, true};
  }

  const LevelSetCurve& curve_;
  const OverlapField& field_;
  BlochVector ni_;
  double step_;
  double tol_;
};

std::vector<std::pair<int, ExtremumKind>> discrete_extrema(const LevelSetCurve& curve) {
  std::vector<std::pair<int, ExtremumKind>> out;
  const int m = static_cast<int>(curve.vertices.size());
  if (m == 0) return out;
  if (m == 1) {
    out.emplace_back(0, ExtremumKind::maximum);
    return out;
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (int v = 0; v < m; ++v) {
    const double o = curve.vertices[static_cast<std::size_t>(v)].overlap;
    double prev_hi = -inf, next_hi = -inf, prev_lo = inf, next_lo = inf;
    if (v > 0 || curve.closed) {
      const double p = curve.vertices[static_cast<std::size_t>((v - 1 + m) % m)].overlap;
      prev_hi = prev_lo = p;
    }
    if (v + 1 < m || curve.closed) {
      const double n = curve.vertices[static_cast<std::size_t>((v + 1) % m)].overlap;
      next_hi = next_lo = n;
    }
    if (o > prev_hi && o >= next_hi) out.emplace_back(v, ExtremumKind::maximum);
    if (o < prev_lo && o <= next_lo) out.emplace_back(v, ExtremumKind::minimum);
  }
  return out;
}

}  // namespace

CollapseSolution solve_collapse_grid(const Axis& initial, const SpinState& state, const SolverConfig& cfg) {
  cfg.validate();
  CollapseSolution sol;
  sol.method = SolverMethod::grid;
  const ConstraintLevels levels = constraint_levels(initial, state);
  if (detail::is_trivial_instance(levels.p_same, cfg.eps_trivial)) {
    detail::finish_solution(sol, initial, state, Status::trivial, nullptr);
    return sol;
  }

  const double level_values[] = {levels.p_same, levels.p_flip};
  sol.curves = trace_level_sets(state, level_values, cfg);
  annotate_curves(sol.curves, initial, cfg.eps_z);

  const bool same_level_traced = std::any_of(sol.curves.begin(), sol.curves.end(),
                                             [](const LevelSetCurve& c) { return c.level_index == 0; });
  if (!same_level_traced) {
    std::ostringstream msg;
    msg << "contour tracer found no crossing for level " << levels.p_same << " through the initial axis (theta="
        << initial.theta() << ", phi=" << initial.phi() << ") with state (rho=" << state.rho()
        << ", tau=" << state.tau() << ") on a " << cfg.grid_n << "^2 grid";
    throw SolverError(msg.str());
  }

  const OverlapField field(state);
  const BlochVector ni = axis_to_bloch(initial);
  const double grid_step = kPi / (cfg.grid_n - 1);

  int component_count = 0;
  for (const auto& c : sol.curves) component_count = std::max(component_count, c.component_id + 1);
  std::vector<bool> zero_component(static_cast<std::size_t>(component_count), false);
  for (const auto& c : sol.curves) {
    if (c.contains_zero_entropy) zero_component[static_cast<std::size_t>(c.component_id)] = true;
  }

  std::vector<Candidate> found;
  std::vector<std::pair<double, double>> raw_positions;
  for (const auto& curve : sol.curves) {
    const CurveRefiner refiner(curve, field, ni, grid_step, cfg.refine_tol);
    for (const auto& [index, kind] : discrete_extrema(curve)) {
      const auto refined = refiner.refine(index, kind);
      if (!refined) continue;
      const auto [theta, phi] = refined->where;
      bool duplicate = false;
      for (std::size_t q = 0; q < found.size(); ++q) {
        if (found[q].component_id == curve.component_id && found[q].kind == kind &&
            std::abs(raw_positions[q].first - theta) < 1e-5 && std::abs(raw_positions[q].second - phi) < 1e-5) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      Candidate cand;
      cand.axis = canonicalize_axis(theta, phi);
      cand.overlap = axes_up_overlap(cand.axis, initial);
      cand.s_up = binary_entropy(cand.overlap).value();
      cand.component_id = curve.component_id;
      cand.is_boundary = refined->is_boundary;
      cand.kind = kind;
      if (is_zero_entropy(cand.overlap, cfg.eps_z)) zero_component[static_cast<std::size_t>(cand.component_id)] = true;
      found.push_back(cand);
      raw_positions.emplace_back(theta, phi);
    }
  }

  for (auto& c : found) c.retained = !zero_component[static_cast<std::size_t>(c.component_id)];
  for (auto& curve : sol.curves) curve.contains_zero_entropy = zero_component[static_cast<std::size_t>(curve.component_id)];

  const Candidate* chosen = detail::pick_candidate(found);
  if (chosen == nullptr) {
    // Retained component without any extremum (flat overlap): fall back to
    // its best vertex.
    const CurveVertex* best = nullptr;
    int best_component = -1;
    for (const auto& curve : sol.curves) {
      if (curve.contains_zero_entropy) continue;
      for (const auto& v : curve.vertices) {
        if (best == nullptr || v.s_up < best->s_up) {
          best = &v;
          best_component = curve.component_id;
        }
      }
    }
    if (best != nullptr) {
      Candidate cand;
      cand.axis = canonicalize_axis(best->theta, best->phi);
      cand.overlap = axes_up_overlap(cand.axis, initial);
      cand.s_up = binary_entropy(cand.overlap).value();
      cand.component_id = best_component;
      cand.retained = true;
      found.push_back(cand);
    }
  }

  sol.candidates = std::move(found);
  chosen = detail::pick_candidate(sol.candidates);
  detail::finish_solution(sol, initial, state, chosen != nullptr ? Status::normal : Status::death_point, chosen);
  return sol;
}

double axis_distance(const Axis& a, const Axis& b) noexcept {
  // Axes are unoriented: n and -n are one observer state, so measure the
  // angle between the lines.
  const BlochVector u = axis_to_bloch(a);
  const BlochVector v = axis_to_bloch(b);
  const double cx = u.y * v.z - u.z * v.y;
  const double cy = u.z * v.x - u.x * v.z;
  const double cz = u.x * v.y - u.y * v.x;
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), std::abs(u.dot(v)));
}

MethodAgreement compare_solutions(const CollapseSolution& grid, const CollapseSolution& closed) {
  MethodAgreement a;
  a.closed_form_status = closed.status;
  a.closed_form_axis = closed.axis_f;
  a.closed_form_s_up = closed.s_up.value();
  a.axis_delta = axis_distance(grid.axis_f, closed.axis_f);
  a.s_up_delta = std::abs(grid.s_up.value() - closed.s_up.value());
  a.agree = grid.status == closed.status &&
            (grid.status != Status::normal || (a.axis_delta <= kAgreementAxisTol && a.s_up_delta <= kAgreementEntropyTol));
  return a;
}

CollapseSolution solve_collapse(const Axis& initial, const SpinState& state, const SolverConfig& cfg) {
  switch (cfg.method) {
    case SolverMethod::grid: return solve_collapse_grid(initial, state, cfg);
    case SolverMethod::closed_form: return solve_collapse_closed_form(initial, state, cfg);
    case SolverMethod::both: {
      CollapseSolution sol = solve_collapse_grid(initial, state, cfg);
      const CollapseSolution closed = solve_collapse_closed_form(initial, state, cfg);
      sol.agreement = compare_solutions(sol, closed);
      sol.method = SolverMethod::both;
      return sol;
    }
  }
  throw std::logic_error("unreachable solver method");
}

}  // namespace collapse

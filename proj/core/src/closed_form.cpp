// Closed-form route. With m the state's Bloch vector, n_i the initial axis
// and c = n_i . m, the two level sets are the circles n . m = c (through n_i,
// the Z point) and n . m = -c. On the second circle the overlap with n_i
// peaks at the reflection n* = n_i - 2 c m with value 1 - c^2, and vanishes
// at -n_i. The chart is the hemisphere n_y >= 0.

#include <algorithm>
#include <cmath>

#include "collapse/solver.hpp"
#include "selection.hpp"

namespace collapse {

namespace {

struct Vec3 {
  double x, y, z;
};

Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
Vec3 cross(Vec3 a, Vec3 b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
Vec3 from(const BlochVector& b) { return {b.x, b.y, b.z}; }

constexpr int kSameComponent = 0;
constexpr int kFlipComponent = 1;

Candidate make_candidate(const Axis& axis, const Axis& initial, int component, bool boundary, ExtremumKind kind) {
  Candidate c;
  c.axis = axis;
  c.overlap = axes_up_overlap(axis, initial);
  c.s_up = binary_entropy(c.overlap).value();
  c.component_id = component;
  c.is_boundary = boundary;
  c.kind = kind;
  return c;
}

}  // namespace

CollapseSolution solve_collapse_closed_form(const Axis& initial, const SpinState& state, const SolverConfig& cfg) {
  CollapseSolution sol;
  sol.method = SolverMethod::closed_form;
  const ConstraintLevels levels = constraint_levels(initial, state);
  if (detail::is_trivial_instance(levels.p_same, cfg.eps_trivial)) {
    detail::finish_solution(sol, initial, state, Status::trivial, nullptr);
    return sol;
  }

  const Vec3 m = from(state_to_bloch(state));
  const Vec3 ni = from(axis_to_bloch(initial));
  const double c = std::clamp(dot(ni, m), -1.0, 1.0);
  const double r = std::sqrt(std::max(0.0, 1.0 - c * c));

  // The Z point itself lives on the discarded circle.
  sol.candidates.push_back(make_candidate(initial, initial, kSameComponent, false, ExtremumKind::maximum));

  const double highest_y = -c * m.y + r * std::sqrt(std::max(0.0, 1.0 - m.y * m.y));
  const Vec3 reflected = ni - (2.0 * c) * m;
  std::vector<Candidate> retained;

  if (highest_y >= 0.0) {
    const bool peak_on_chart = reflected.y >= 0.0;
    if (peak_on_chart) {
      retained.push_back(make_candidate(axis_from_direction({reflected.x, reflected.y, reflected.z}), initial,
                                        kFlipComponent, false, ExtremumKind::maximum));
    } else {
      // The peak's antipode sits on the discarded circle.
      sol.candidates.push_back(make_candidate(axis_from_direction({reflected.x, reflected.y, reflected.z}), initial,
                                              kSameComponent, false, ExtremumKind::minimum));
    }
    // Seam endpoints of the retained arc. Along the arc the overlap is
    // monotone between them (its zero, -n_i, is off-chart), so they carry
    // the arc's minimum and, with the peak off-chart, its maximum.
    const double lowest_y = -c * m.y - r * std::sqrt(std::max(0.0, 1.0 - m.y * m.y));
    if (lowest_y < 0.0) {
      const Vec3 u = (1.0 / r) * (ni - c * m);
      const Vec3 v = cross(m, u);
      const double a_coef = r * u.y;
      const double b_coef = r * v.y;
      const double amp = std::hypot(a_coef, b_coef);
      const double alpha0 = std::atan2(b_coef, a_coef);
      const double spread = std::acos(std::clamp(c * m.y / amp, -1.0, 1.0));
      std::vector<std::pair<double, Axis>> ends;
      for (double alpha : {alpha0 - spread, alpha0 + spread}) {
        const Vec3 n = (-c) * m + r * (std::cos(alpha) * u + std::sin(alpha) * v);
        const double theta = std::acos(std::clamp(n.z, -1.0, 1.0));
        const double phi = n.x >= 0.0 ? 0.0 : kPi;
        ends.emplace_back(0.5 * (1.0 + dot(n, ni)), canonicalize_axis(theta, phi));
      }
      const bool first_higher = ends[0].first >= ends[1].first;
      retained.push_back(make_candidate(ends[0].second, initial, kFlipComponent, true,
                                        first_higher ? ExtremumKind::maximum : ExtremumKind::minimum));
      retained.push_back(make_candidate(ends[1].second, initial, kFlipComponent, true,
                                        first_higher ? ExtremumKind::minimum : ExtremumKind::maximum));
    }
  }

  const bool flip_has_zero = std::any_of(retained.begin(), retained.end(), [&](const Candidate& k) {
    return is_zero_entropy(k.overlap, cfg.eps_z);
  });
  for (auto& k : retained) k.retained = !flip_has_zero;
  sol.candidates.insert(sol.candidates.end(), retained.begin(), retained.end());

  const Candidate* chosen = detail::pick_candidate(sol.candidates);
  detail::finish_solution(sol, initial, state, chosen != nullptr ? Status::normal : Status::death_point, chosen);
  return sol;
}

}  // namespace collapse

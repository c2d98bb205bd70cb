#pragma once

// Marching-squares extraction of the curves |<up(theta, phi)|psi>|^2 = level
// over the closed chart [0, pi] x [0, pi], linked into polylines and grouped
// into connected components.

#include <span>
#include <vector>

#include "collapse/bloch.hpp"
#include "collapse/solver_config.hpp"

namespace collapse {

/// Which side of the sampled rectangle a polyline endpoint sits on.
enum class GridEdge { none, theta_low, theta_high, phi_low, phi_high };

struct CurveVertex {
  double theta = 0.0;  ///< raw grid coordinates; may sit on the phi = pi edge
  double phi = 0.0;
  double overlap = 0.0;  ///< |<up_v|up_i>|^2, filled by annotate_curves
  double s_up = 0.0;
};

struct LevelSetCurve {
  double level = 0.0;
  int level_index = 0;  ///< position of `level` in the list passed to trace_level_sets
  std::vector<CurveVertex> vertices;
  int component_id = 0;
  bool closed = false;
  bool touches_boundary = false;
  GridEdge start_edge = GridEdge::none;
  GridEdge end_edge = GridEdge::none;
  bool contains_zero_entropy = false;
};

/// Raw (unclamped) overlap |<up(theta, phi)|psi>|^2 and its gradient, used
/// by the tracer and the curve refinement.
struct OverlapField {
  double half_minus_rho;  // rho - 1/2
  double amplitude;       // sqrt(rho (1 - rho))
  double tau;

  explicit OverlapField(const SpinState& s);
  [[nodiscard]] double value(double theta, double phi) const noexcept;
  [[nodiscard]] double d_theta(double theta, double phi) const noexcept;
  [[nodiscard]] double d_phi(double theta, double phi) const noexcept;
};

/// Trace every level on a cfg.grid_n x cfg.grid_n grid. Levels whose curve
/// misses the chart yield no polylines (not an error). Component ids are
/// dense, ordered by level index then by first polyline; components never
/// span two levels unless cfg.identify_boundary stitches them at the seam.
[[nodiscard]] std::vector<LevelSetCurve> trace_level_sets(const SpinState& state, std::span<const double> levels,
                                                          const SolverConfig& cfg);

/// Fill per-vertex overlap / S_up against the initial axis and flag curves
/// whose vertices reach S_up <= eps_z or overlap within eps_z of 0 or 1.
void annotate_curves(std::vector<LevelSetCurve>& curves, const Axis& initial, double eps_z);

/// Number of distinct component ids in `curves`.
[[nodiscard]] int count_components(std::span<const LevelSetCurve> curves);

/// True iff the overlap value, or its entropy, marks a zero-entropy point.
[[nodiscard]] bool is_zero_entropy(double overlap, double eps_z);

}  // namespace collapse

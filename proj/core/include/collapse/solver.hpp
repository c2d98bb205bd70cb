#pragma once

// Final observer axis after a collapse: entropy conservation S_f = S_i splits
// into the two level sets |<up_f|psi>|^2 = p_i and 1 - p_i; the component that
// holds a zero-entropy (Z) point is discarded and S_up is minimized over the
// rest. Two independent routes: contour tracing on a grid, and circle algebra
// on the Bloch sphere.

#include <optional>
#include <string_view>
#include <vector>

#include "collapse/bloch.hpp"
#include "collapse/entropy.hpp"
#include "collapse/level_sets.hpp"
#include "collapse/solver_config.hpp"

namespace collapse {

enum class Status { normal, death_point, trivial };

/// "Normal", "DeathPoint", "Trivial".
[[nodiscard]] std::string_view to_string(Status s) noexcept;

enum class ExtremumKind { maximum, minimum };

struct Candidate {
  Axis axis;
  double overlap = 0.0;  ///< axes_up_overlap(axis, initial)
  double s_up = 0.0;
  int component_id = 0;
  bool is_boundary = false;
  bool retained = false;  ///< false when its component holds a Z point
  ExtremumKind kind = ExtremumKind::maximum;
};

struct ConstraintLevels {
  double p_same;  ///< |<up_i|psi>|^2
  double p_flip;  ///< 1 - p_same
};

/// Grid vs closed-form comparison, filled when the method is `both`.
struct MethodAgreement {
  Status closed_form_status = Status::normal;
  Axis closed_form_axis;
  double closed_form_s_up = 0.0;
  double axis_delta = 0.0;  ///< axis_distance between the two final axes
  double s_up_delta = 0.0;
  bool agree = true;
};

inline constexpr double kAgreementAxisTol = 1e-4;
inline constexpr double kAgreementEntropyTol = 1e-6;

struct CollapseSolution {
  Status status = Status::trivial;
  SolverMethod method = SolverMethod::grid;
  Axis axis_i;
  Axis axis_f;
  Entropy s_i;
  Entropy s_f;
  Entropy s_up;
  double overlap = 1.0;  ///< axes_up_overlap(axis_f, axis_i)
  std::vector<Candidate> candidates;
  std::vector<LevelSetCurve> curves;  ///< empty for the closed-form route
  std::optional<MethodAgreement> agreement;
};

[[nodiscard]] ConstraintLevels constraint_levels(const Axis& initial, const SpinState& state) noexcept;

/// Dispatch on cfg.method. With `both`, the grid solution is returned and
/// `agreement` records how the closed form compares.
[[nodiscard]] CollapseSolution solve_collapse(const Axis& initial, const SpinState& state,
                                              const SolverConfig& cfg = {});

/// Contour-tracing route. Throws SolverError if the level through the initial
/// axis cannot be traced.
[[nodiscard]] CollapseSolution solve_collapse_grid(const Axis& initial, const SpinState& state,
                                                   const SolverConfig& cfg = {});

/// Closed-form route on the Bloch sphere. Uses eps_trivial and eps_z from cfg.
[[nodiscard]] CollapseSolution solve_collapse_closed_form(const Axis& initial, const SpinState& state,
                                                          const SolverConfig& cfg = {});

/// Angle between two axes taken as unoriented lines, in [0, pi/2].
[[nodiscard]] double axis_distance(const Axis& a, const Axis& b) noexcept;

[[nodiscard]] MethodAgreement compare_solutions(const CollapseSolution& grid, const CollapseSolution& closed);

}  // namespace collapse

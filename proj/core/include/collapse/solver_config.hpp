#pragma once

#include <string_view>

namespace collapse {

enum class SolverMethod { grid, closed_form, both };

[[nodiscard]] std::string_view to_string(SolverMethod m) noexcept;
/// Accepts "grid", "closed", "closed_form", "both". Throws std::invalid_argument otherwise.
[[nodiscard]] SolverMethod parse_solver_method(std::string_view text);

struct SolverConfig {
  int grid_n = 1024;           ///< samples per chart dimension, including both ends of [0, pi]
  double eps_trivial = 1e-9;   ///< |<up_i|psi>|^2 this close to 0 or 1 means no collapse
  double eps_z = 1e-6;         ///< S_up (or overlap distance to {0,1}) at or below this is a Z point
  double refine_tol = 1e-7;    ///< golden-section bracket width along a curve, radians
  SolverMethod method = SolverMethod::both;
  bool identify_boundary = false;  ///< stitch arcs across the phi = 0 / pi seam

  /// Throws DomainError on grid_n < 64 or non-positive tolerances.
  void validate() const;
};

}  // namespace collapse

#pragma once

// Shared by the grid and closed-form routes: pick the final axis from a
// candidate list and fill the solution record.

#include <span>
#include <vector>

#include "collapse/solver.hpp"

namespace collapse::detail {

/// Candidate minimizing S_up among retained interior extrema, falling back to
/// retained boundary endpoints. Near-equal S_up values (1e-12) are ordered by
/// (theta, phi). Returns nullptr when nothing is retained.
const Candidate* pick_candidate(std::span<const Candidate> candidates);

/// Fill status, entropies and axes. `chosen == nullptr` with `status ==
/// normal` is a caller bug.
void finish_solution(CollapseSolution& sol, const Axis& initial, const SpinState& state, Status status,
                     const Candidate* chosen);

/// True if min(p, 1 - p) <= eps_trivial.
bool is_trivial_instance(double p_same, double eps_trivial);

}  // namespace collapse::detail

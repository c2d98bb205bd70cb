#pragma once

// Serialized forms: JSON for solutions, JSON lines for automaton traces, CSV
// for level-set polylines.

#include <iosfwd>
#include <span>
#include <string>

#include "collapse/automaton.hpp"
#include "collapse/level_sets.hpp"
#include "collapse/solver.hpp"

namespace collapse {

/// One trace line: {step, status, theta_i, phi_i, theta_f, phi_f, outcome,
/// rho_before, tau_before, rho_after, tau_after, s_i, s_up, world_id};
/// outcome is 1, 0 or null.
[[nodiscard]] std::string step_record_json(const StepRecord& record);

void write_jsonl(std::ostream& out, const RunResult& result);

/// {steps, halted, halt_reason, death_step}
[[nodiscard]] std::string run_summary_json(const RunResult& result);

/// {status, theta_f, phi_f, s_up, s_i, s_f, overlap, theta_i, phi_i, method,
///  candidates[], method_agreement}; method_agreement is null unless both
/// routes ran. indent < 0 gives a single line.
[[nodiscard]] std::string solution_json(const CollapseSolution& sol, int indent = -1);

inline constexpr const char* kTraceCsvHeader = "theta,phi,level,component,overlap,s_up,is_boundary";

/// Header plus one row per vertex, curves sorted by component id (stable).
void write_trace_csv(std::ostream& out, std::span<const LevelSetCurve> curves);

}  // namespace collapse

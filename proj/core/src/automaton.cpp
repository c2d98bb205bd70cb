#include "collapse/automaton.hpp"

#include <algorithm>
#include <vector>

#include "collapse/errors.hpp"

namespace collapse {

std::string_view to_string(HaltReason r) noexcept {
  switch (r) {
    case HaltReason::death_point: return "death_point";
    case HaltReason::trivial: return "trivial";
    case HaltReason::max_steps: return "max_steps";
  }
  return "max_steps";
}

ObserverAutomaton::ObserverAutomaton(Axis initial_axis, BoolExpr pfn, SolverConfig cfg, std::string world_id)
    : axis_(initial_axis), pfn_(std::move(pfn)), cfg_(cfg), world_id_(std::move(world_id)) {
  cfg_.validate();
  if (pfn_.memory_depth() > kMaxMemoryDepth) {
    throw CapacityError("P function memory depth above " + std::to_string(kMaxMemoryDepth));
  }
}

void ObserverAutomaton::seed_history(std::span<const HistoryEntry> entries) {
  const auto keep = std::min(entries.size(), static_cast<std::size_t>(memory_depth()));
  history_.assign(entries.begin(), entries.begin() + static_cast<std::ptrdiff_t>(keep));
}

ObserverAutomaton::StepOutput ObserverAutomaton::step(const SpinState& input) {
  StepRecord rec;
  rec.step_index = ++steps_;
  rec.state_before = input;
  rec.axis_before = axis_;
  rec.world_id = world_id_;

  if (halt_status_) {
    // No collapse once halted: the machine is stuck at its last axis.
    rec.status = *halt_status_;
    rec.axis_after = axis_;
    rec.state_after = input;
    rec.s_i = binary_entropy(up_overlap_prob(axis_, input));
    rec.s_up = Entropy(0.0);
    return {input, rec};
  }

  if (history_.size() < static_cast<std::size_t>(memory_depth())) {
    --steps_;
    throw HistoryError("automaton history holds " + std::to_string(history_.size()) + " of " +
                       std::to_string(memory_depth()) + " required entries; seed it first");
  }

  const CollapseSolution sol = solve_collapse(axis_, input, cfg_);
  rec.status = sol.status;
  rec.axis_after = sol.axis_f;
  rec.s_i = sol.s_i;
  rec.s_up = sol.s_up;

  if (sol.status != Status::normal) {
    halt_status_ = sol.status;
    rec.state_after = input;
    return {input, rec};
  }

  const std::vector<HistoryEntry> window(history_.begin(), history_.end());
  const Outcome outcome = decide_outcome(pfn_, sol.axis_f, window);
  const SpinState output = eigenstate_as_state(sol.axis_f, outcome);
  rec.outcome = outcome;
  rec.state_after = output;

  if (memory_depth() > 0) {
    history_.push_front({project_axis(sol.axis_f), outcome});
    while (history_.size() > static_cast<std::size_t>(memory_depth())) history_.pop_back();
  }
  axis_ = sol.axis_f;
  return {output, rec};
}

RunResult ObserverAutomaton::run(const SpinState& initial, std::size_t max_steps) {
  if (max_steps < 1) throw DomainError("run: max_steps must be >= 1");
  RunResult result;
  SpinState state = initial;
  for (std::size_t i = 0; i < max_steps; ++i) {
    StepOutput out = step(state);
    const Status status = out.record.status;
    result.records.push_back(std::move(out.record));
    state = out.output_state;
    if (status != Status::normal) {
      result.halted = true;
      result.halt_reason = status == Status::trivial ? HaltReason::trivial : HaltReason::death_point;
      result.death_step = result.records.back().step_index;
      return result;
    }
  }
  result.halted = false;
  result.halt_reason = HaltReason::max_steps;
  return result;
}

void ObserverAutomaton::switch_world(BoolExpr new_pfn, std::string new_world_id) {
  if (new_pfn.memory_depth() != memory_depth()) {
    throw ArityError("world switch changes memory depth from " + std::to_string(memory_depth()) + " to " +
                     std::to_string(new_pfn.memory_depth()));
  }
  transitions_.push_back({steps_, world_id_, new_world_id});
  pfn_ = std::move(new_pfn);
  world_id_ = std::move(new_world_id);
}

}  // namespace collapse

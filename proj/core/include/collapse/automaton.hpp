#pragma once

// Mealy-automaton view of the model: the internal state is the observer's
// axis, the transition is the collapse solver, and the output is chosen by
// the P function. Iterating feeds each output state back in as the next
// input; a Trivial or DeathPoint step halts the machine.

#include <cstddef>
#include <deque>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collapse/pfn.hpp"
#include "collapse/solver.hpp"

namespace collapse {

struct StepRecord {
  std::size_t step_index = 0;  ///< 1-based
  SpinState state_before;
  Axis axis_before;
  Status status = Status::trivial;
  Axis axis_after;
  std::optional<Outcome> outcome;  ///< present iff status is Normal
  SpinState state_after;
  Entropy s_i;
  Entropy s_up;
  std::string world_id;
};

enum class HaltReason { death_point, trivial, max_steps };

/// "death_point", "trivial", "max_steps".
[[nodiscard]] std::string_view to_string(HaltReason r) noexcept;

struct RunResult {
  std::vector<StepRecord> records;
  bool halted = false;
  HaltReason halt_reason = HaltReason::max_steps;
  std::optional<std::size_t> death_step;  ///< step at which collapse stopped
};

struct WorldTransition {
  std::size_t after_step;
  std::string from;
  std::string to;
};

class ObserverAutomaton {
 public:
  struct StepOutput {
    SpinState output_state;
    StepRecord record;
  };

  ObserverAutomaton(Axis initial_axis, BoolExpr pfn, SolverConfig cfg = {}, std::string world_id = "P0");

  /// Most recent entry first. Keeps the first memory_depth() entries.
  void seed_history(std::span<const HistoryEntry> entries);

  /// One transition/output pair. Throws HistoryError when the P function has
  /// memory and the history is not yet full.
  StepOutput step(const SpinState& input);

  /// Iterate step() until a halt or max_steps (>= 1, else DomainError).
  RunResult run(const SpinState& initial, std::size_t max_steps);

  /// Replace the output function. Throws ArityError on a memory-depth mismatch.
  void switch_world(BoolExpr new_pfn, std::string new_world_id);

  [[nodiscard]] const Axis& current_axis() const noexcept { return axis_; }
  [[nodiscard]] const BoolExpr& pfn() const noexcept { return pfn_; }
  [[nodiscard]] int memory_depth() const noexcept { return pfn_.memory_depth(); }
  [[nodiscard]] const std::deque<HistoryEntry>& history() const noexcept { return history_; }
  [[nodiscard]] bool halted() const noexcept { return halt_status_.has_value(); }
  [[nodiscard]] const std::string& world_id() const noexcept { return world_id_; }
  [[nodiscard]] const std::vector<WorldTransition>& transitions() const noexcept { return transitions_; }
  [[nodiscard]] std::size_t steps_taken() const noexcept { return steps_; }

 private:
  Axis axis_;
  BoolExpr pfn_;
  SolverConfig cfg_;
  std::string world_id_;
  std::deque<HistoryEntry> history_;
  std::optional<Status> halt_status_;
  std::vector<WorldTransition> transitions_;
  std::size_t steps_ = 0;
};

}  // namespace collapse

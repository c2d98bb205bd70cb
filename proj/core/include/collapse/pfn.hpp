#pragma once

// The P function: a boolean outcome policy over the projected final angles
// (x = step(cos theta_f), y = step(cos phi_f)) and, with memory depth n, the
// projections and outcomes of the n previous measurements (xk, yk, sk).
//
// Truth-table layout: variables ordered [x, y, x1, y1, s1, ..., xn, yn, sn];
// row index packs them big-endian (x is the most significant bit). Hex form
// reads rows in order, row 0 as the most significant bit of the first digit.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "collapse/bloch.hpp"

namespace collapse {

inline constexpr int kMaxMemoryDepth = 4;

[[nodiscard]] constexpr int variable_count(int memory_depth) noexcept { return 2 + 3 * memory_depth; }

/// One slot of the P-function signature.
struct Variable {
  enum class Kind : std::uint8_t { x, y, s };
  Kind kind = Kind::x;
  int lag = 0;  ///< 0 for the current measurement, k >= 1 for history entry k

  /// Position in the truth-table variable order.
  [[nodiscard]] int slot() const noexcept;
  [[nodiscard]] std::string name() const;
  friend bool operator==(const Variable&, const Variable&) = default;
};

class BoolExpr {
 public:
  enum class Op : std::uint8_t { constant, variable, negation, conjunction, disjunction, exclusive_or };

  BoolExpr() : BoolExpr(false) {}

  static BoolExpr constant(bool value, int memory_depth = 0);
  static BoolExpr var(Variable v, int memory_depth);
  static BoolExpr negate(BoolExpr e);
  static BoolExpr conj(BoolExpr a, BoolExpr b);
  static BoolExpr disj(BoolExpr a, BoolExpr b);
  static BoolExpr exclusive(BoolExpr a, BoolExpr b);

  [[nodiscard]] Op op() const noexcept;
  [[nodiscard]] bool constant_value() const noexcept;
  [[nodiscard]] const Variable& variable() const noexcept;
  [[nodiscard]] const BoolExpr& lhs() const;
  [[nodiscard]] const BoolExpr& rhs() const;

  /// Declared memory depth n.
  [[nodiscard]] int memory_depth() const noexcept { return depth_; }

  /// Evaluate on a truth-table row (see layout above) of a table with the
  /// given depth, which must be >= memory_depth().
  [[nodiscard]] bool evaluate(std::uint32_t row, int table_depth) const;

 private:
  struct Node;
  explicit BoolExpr(bool value);
  BoolExpr(std::shared_ptr<const Node> node, int depth) : node_(std::move(node)), depth_(depth) {}

  std::shared_ptr<const Node> node_;
  int depth_ = 0;
};

/// Grammar (precedence NOT > AND > XOR > OR, binary operators left-assoc):
///   or  := xor ('|' xor)*      xor := and ('^' and)*
///   and := not ('&' not)*      not := '!' not | atom
///   atom := '0' | '1' | 'x' | 'y' | 'x'k | 'y'k | 's'k | '(' or ')'
/// Throws SyntaxError (with position) or ArityError (index k > memory_depth).
[[nodiscard]] BoolExpr parse_expr(std::string_view text, int memory_depth);

/// Printer whose output parse_expr accepts; operands of a different binary
/// operator are parenthesized, e.g. "(!x&y)|(x&y)".
[[nodiscard]] std::string render(const BoolExpr& e);

class TruthTable {
 public:
  /// All-zero table. Throws CapacityError for depth outside [0, 4].
  explicit TruthTable(int memory_depth);
  TruthTable(int memory_depth, std::vector<std::uint8_t> bits);

  [[nodiscard]] int memory_depth() const noexcept { return depth_; }
  [[nodiscard]] std::size_t size() const noexcept { return bits_.size(); }
  [[nodiscard]] bool at(std::size_t row) const { return bits_.at(row) != 0; }
  void set(std::size_t row, bool value) { bits_.at(row) = value ? 1 : 0; }
  [[nodiscard]] std::span<const std::uint8_t> bits() const noexcept { return bits_; }
  [[nodiscard]] std::size_t count_ones() const noexcept;

  [[nodiscard]] std::string to_hex() const;
  /// Throws std::invalid_argument on a wrong length or a non-hex digit.
  static TruthTable from_hex(std::string_view hex, int memory_depth);

  friend bool operator==(const TruthTable&, const TruthTable&) = default;

 private:
  int depth_;
  std::vector<std::uint8_t> bits_;
};

/// Exhaustive evaluation. Throws CapacityError for n > 4 and ArityError when
/// the expression needs a deeper table than n.
[[nodiscard]] TruthTable to_truth_table(const BoolExpr& e, int memory_depth);
[[nodiscard]] inline TruthTable to_truth_table(const BoolExpr& e) { return to_truth_table(e, e.memory_depth()); }

/// Canonical minterm DNF (constant 0 for an all-zero table).
[[nodiscard]] BoolExpr to_dnf(const TruthTable& t);
/// Canonical maxterm CNF (constant 1 for an all-one table).
[[nodiscard]] BoolExpr to_cnf(const TruthTable& t);

struct BoolProjection {
  bool xi = false;
  bool eta = false;
  friend bool operator==(const BoolProjection&, const BoolProjection&) = default;
};

/// xi = step(cos theta), eta = step(cos phi), step(v) = 1 iff v > 0. On the
/// chart this is theta < pi/2, phi < pi/2; the double nearest pi/2 maps to 0.
[[nodiscard]] BoolProjection project_axis(const Axis& a) noexcept;

struct HistoryEntry {
  BoolProjection projection;
  Outcome outcome = Outcome::down;
  friend bool operator==(const HistoryEntry&, const HistoryEntry&) = default;
};

/// Evaluate the P function. history[0] is the previous measurement (lag 1).
/// Throws HistoryError if history.size() < e.memory_depth().
[[nodiscard]] Outcome decide_outcome(const BoolExpr& e, const Axis& axis_f, std::span<const HistoryEntry> history);

enum class Measure { chart_uniform, sphere_area };
enum class ProbabilityMethod { analytic, monte_carlo };

[[nodiscard]] std::string_view to_string(Measure m) noexcept;
[[nodiscard]] std::string_view to_string(ProbabilityMethod m) noexcept;

/// Probability of the up outcome when the final axis is drawn from `measure`.
/// Analytic needs memory depth 0 (UnsupportedError otherwise). Monte Carlo
/// draws history bits uniformly; samples < 1 is a DomainError.
[[nodiscard]] double outcome_probability(const BoolExpr& e, Measure measure, ProbabilityMethod method,
                                         std::int64_t samples = 0, std::uint64_t seed = 0);

}  // namespace collapse

#include "collapse/pfn.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <random>
#include <stdexcept>

#include "collapse/errors.hpp"

namespace collapse {

// ---------------------------------------------------------------------------
// Expression tree

struct BoolExpr::Node {
  Op op = Op::constant;
  bool value = false;
  Variable var;
  std::vector<BoolExpr> children;
};

int Variable::slot() const noexcept {
  if (lag == 0) return kind == Kind::x ? 0 : 1;
  const int base = 2 + 3 * (lag - 1);
  switch (kind) {
    case Kind::x: return base;
    case Kind::y: return base + 1;
    case Kind::s: return base + 2;
  }
  return base;
}

std::string Variable::name() const {
  const char letter = kind == Kind::x ? 'x' : (kind == Kind::y ? 'y' : 's');
  return lag == 0 ? std::string(1, letter) : letter + std::to_string(lag);
}

BoolExpr::BoolExpr(bool value) {
  auto node = std::make_shared<Node>();
  node->value = value;
  node_ = std::move(node);
}

BoolExpr BoolExpr::constant(bool value, int memory_depth) {
  BoolExpr e(value);
  e.depth_ = memory_depth;
  return e;
}

BoolExpr BoolExpr::var(Variable v, int memory_depth) {
  if (v.lag < 0 || v.lag > memory_depth) {
    throw ArityError("variable " + v.name() + " exceeds memory depth " + std::to_string(memory_depth));
  }
  if (v.kind == Variable::Kind::s && v.lag == 0) throw ArityError("outcome variable s needs a lag >= 1");
  auto node = std::make_shared<Node>();
  node->op = Op::variable;
  node->var = v;
  return BoolExpr(std::move(node), memory_depth);
}

BoolExpr BoolExpr::negate(BoolExpr e) {
  auto node = std::make_shared<Node>();
  node->op = Op::negation;
  const int depth = e.depth_;
  node->children.push_back(std::move(e));
  return BoolExpr(std::move(node), depth);
}

BoolExpr BoolExpr::conj(BoolExpr a, BoolExpr b) {
  auto node = std::make_shared<Node>();
  node->op = Op::conjunction;
  const int depth = std::max(a.depth_, b.depth_);
  node->children = {std::move(a), std::move(b)};
  return BoolExpr(std::move(node), depth);
}

BoolExpr BoolExpr::disj(BoolExpr a, BoolExpr b) {
  auto node = std::make_shared<Node>();
  node->op = Op::disjunction;
  const int depth = std::max(a.depth_, b.depth_);
  node->children = {std::move(a), std::move(b)};
  return BoolExpr(std::move(node), depth);
}

BoolExpr BoolExpr::exclusive(BoolExpr a, BoolExpr b) {
  auto node = std::make_shared<Node>();
  node->op = Op::exclusive_or;
  const int depth = std::max(a.depth_, b.depth_);
  node->children = {std::move(a), std::move(b)};
  return BoolExpr(std::move(node), depth);
}

BoolExpr::Op BoolExpr::op() const noexcept { return node_->op; }
bool BoolExpr::constant_value() const noexcept { return node_->value; }
const Variable& BoolExpr::variable() const noexcept { return node_->var; }
const BoolExpr& BoolExpr::lhs() const { return node_->children.at(0); }
const BoolExpr& BoolExpr::rhs() const { return node_->children.at(1); }

bool BoolExpr::evaluate(std::uint32_t row, int table_depth) const {
  const Node& n = *node_;
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: {
      const int shift = variable_count(table_depth) - 1 - n.var.slot();
      return ((row >> shift) & 1U) != 0;
    }
    case Op::negation: return !n.children[0].evaluate(row, table_depth);
    case Op::conjunction: return n.children[0].evaluate(row, table_depth) && n.children[1].evaluate(row, table_depth);
    case Op::disjunction: return n.children[0].evaluate(row, table_depth) || n.children[1].evaluate(row, table_depth);
    case Op::exclusive_or: return n.children[0].evaluate(row, table_depth) != n.children[1].evaluate(row, table_depth);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  Parser(std::string_view text, int depth) : text_(text), depth_(depth) {}

  BoolExpr parse() {
    skip_space();
    if (pos_ == text_.size()) fail("empty expression");
    BoolExpr e = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail(std::string("unexpected '") + text_[pos_] + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw SyntaxError(what + " at position " + std::to_string(pos_), pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  BoolExpr parse_or() {
    BoolExpr e = parse_xor();
    while (accept('|')) e = BoolExpr::disj(std::move(e), parse_xor());
    return e;
  }

  BoolExpr parse_xor() {
    BoolExpr e = parse_and();
    while (accept('^')) e = BoolExpr::exclusive(std::move(e), parse_and());
    return e;
  }

  BoolExpr parse_and() {
    BoolExpr e = parse_not();
    while (accept('&')) e = BoolExpr::conj(std::move(e), parse_not());
    return e;
  }

  BoolExpr parse_not() {
    if (accept('!')) return BoolExpr::negate(parse_not());
    return parse_atom();
  }

  BoolExpr parse_atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const std::size_t start = pos_;
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      BoolExpr inner = parse_or();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (c == '0' || c == '1') {
      ++pos_;
      return BoolExpr::constant(c == '1', depth_);
    }
    if (c == 'x' || c == 'y' || c == 's') {
      ++pos_;
      int lag = 0;
      bool digits = false;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits = true;
        lag = lag * 10 + (text_[pos_] - '0');
        if (lag > 1000) fail("variable index too large");
        ++pos_;
      }
      if (c == 's' && !digits) {
        pos_ = start;
        fail("outcome variable 's' needs an index");
      }
      if (digits && lag == 0) {
        pos_ = start;
        fail("memory variable index must be >= 1");
      }
      const Variable::Kind kind = c == 'x' ? Variable::Kind::x : (c == 'y' ? Variable::Kind::y : Variable::Kind::s);
      if (lag > depth_) {
        throw ArityError("variable " + std::string(text_.substr(start, pos_ - start)) + " exceeds memory depth " +
                             std::to_string(depth_) + " at position " + std::to_string(start),
                         start);
      }
      return BoolExpr::var({kind, lag}, depth_);
    }
    fail(std::string("unexpected '") + c + "'");
  }

  std::string_view text_;
  int depth_;
  std::size_t pos_ = 0;
};

bool is_binary(BoolExpr::Op op) {
  return op == BoolExpr::Op::conjunction || op == BoolExpr::Op::disjunction || op == BoolExpr::Op::exclusive_or;
}

char symbol(BoolExpr::Op op) {
  switch (op) {
    case BoolExpr::Op::conjunction: return '&';
    case BoolExpr::Op::disjunction: return '|';
    default: return '^';
  }
}

void render_into(const BoolExpr& e, std::string& out) {
  switch (e.op()) {
    case BoolExpr::Op::constant: out += e.constant_value() ? '1' : '0'; return;
    case BoolExpr::Op::variable: out += e.variable().name(); return;
    case BoolExpr::Op::negation: {
      out += '!';
      const bool wrap = is_binary(e.lhs().op());
      if (wrap) out += '(';
      render_into(e.lhs(), out);
      if (wrap) out += ')';
      return;
    }
    default: {
      for (const BoolExpr* child : {&e.lhs(), &e.rhs()}) {
        if (child == &e.rhs()) out += symbol(e.op());
        const bool wrap = is_binary(child->op()) && child->op() != e.op();
        if (wrap) out += '(';
        render_into(*child, out);
        if (wrap) out += ')';
      }
      return;
    }
  }
}

void check_depth(int depth) {
  if (depth < 0 || depth > kMaxMemoryDepth) {
    throw CapacityError("memory depth " + std::to_string(depth) + " outside [0, " + std::to_string(kMaxMemoryDepth) +
                        "]");
  }
}

std::size_t row_count(int depth) { return std::size_t{1} << variable_count(depth); }

BoolExpr literal(int slot, bool positive, int depth) {
  Variable v;
  if (slot < 2) {
    v = {slot == 0 ? Variable::Kind::x : Variable::Kind::y, 0};
  } else {
    const int lag = (slot - 2) / 3 + 1;
    const int which = (slot - 2) % 3;
    v = {which == 0 ? Variable::Kind::x : (which == 1 ? Variable::Kind::y : Variable::Kind::s), lag};
  }
  BoolExpr e = BoolExpr::var(v, depth);
  return positive ? e : BoolExpr::negate(std::move(e));
}

// One product/sum term per selected row, joined with `join`.
BoolExpr normal_form(const TruthTable& t, bool select, bool dnf) {
  const int depth = t.memory_depth();
  const int vars = variable_count(depth);
  std::optional<BoolExpr> result;
  for (std::size_t row = 0; row < t.size(); ++row) {
    if (t.at(row) != select) continue;
    std::optional<BoolExpr> term;
    for (int slot = 0; slot < vars; ++slot) {
      const bool bit = ((row >> (vars - 1 - slot)) & 1U) != 0;
      // minterm: literal true on this row; maxterm: literal false on it
      BoolExpr lit = literal(slot, dnf ? bit : !bit, depth);
      if (!term) {
        term = std::move(lit);
      } else {
        term = dnf ? BoolExpr::conj(std::move(*term), std::move(lit)) : BoolExpr::disj(std::move(*term), std::move(lit));
      }
    }
    if (!result) {
      result = std::move(*term);
    } else {
      result = dnf ? BoolExpr::disj(std::move(*result), std::move(*term))
                   : BoolExpr::conj(std::move(*result), std::move(*term));
    }
  }
  if (!result) return BoolExpr::constant(!dnf, depth);
  return std::move(*result);
}

double uniform01(std::mt19937_64& gen) { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

}  // namespace

BoolExpr parse_expr(std::string_view text, int memory_depth) {
  if (memory_depth < 0) throw ArityError("memory depth must be non-negative");
  return Parser(text, memory_depth).parse();
}

std::string render(const BoolExpr& e) {
  std::string out;
  render_into(e, out);
  return out;
}

// ---------------------------------------------------------------------------
// Truth tables

TruthTable::TruthTable(int memory_depth) : depth_(memory_depth) {
  check_depth(memory_depth);
  bits_.assign(row_count(memory_depth), 0);
}

TruthTable::TruthTable(int memory_depth, std::vector<std::uint8_t> bits) : depth_(memory_depth), bits_(std::move(bits)) {
  check_depth(memory_depth);
  if (bits_.size() != row_count(memory_depth)) {
    throw std::invalid_argument("truth table for depth " + std::to_string(memory_depth) + " needs " +
                                std::to_string(row_count(memory_depth)) + " rows, got " + std::to_string(bits_.size()));
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

std::size_t TruthTable::count_ones() const noexcept {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string TruthTable::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bits_.size() / 4);
  for (std::size_t i = 0; i < bits_.size(); i += 4) {
    const int nibble = bits_[i] << 3 | bits_[i + 1] << 2 | bits_[i + 2] << 1 | bits_[i + 3];
    out += kDigits[nibble];
  }
  return out;
}

TruthTable TruthTable::from_hex(std::string_view hex, int memory_depth) {
  check_depth(memory_depth);
  const std::size_t rows = row_count(memory_depth);
  if (hex.size() != rows / 4) {
    throw std::invalid_argument("hex truth table for depth " + std::to_string(memory_depth) + " needs " +
                                std::to_string(rows / 4) + " digits, got " + std::to_string(hex.size()));
  }
  std::vector<std::uint8_t> bits;
  bits.reserve(rows);
  for (std::size_t i = 0; i < hex.size(); ++i) {
    const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[i])));
    int nibble = 0;
    if (c >= '0' && c <= '9') {
      nibble = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      nibble = c - 'a' + 10;
    } else {
      throw std::invalid_argument("invalid hex digit '" + std::string(1, hex[i]) + "' at position " + std::to_string(i));
    }
    for (int b = 3; b >= 0; --b) bits.push_back(static_cast<std::uint8_t>((nibble >> b) & 1));
  }
  return TruthTable(memory_depth, std::move(bits));
}

TruthTable to_truth_table(const BoolExpr& e, int memory_depth) {
  check_depth(memory_depth);
  if (e.memory_depth() > memory_depth) {
    throw ArityError("expression has memory depth " + std::to_string(e.memory_depth()) + " > table depth " +
                     std::to_string(memory_depth));
  }
  TruthTable t(memory_depth);
  for (std::size_t row = 0; row < t.size(); ++row) t.set(row, e.evaluate(static_cast<std::uint32_t>(row), memory_depth));
  return t;
}

BoolExpr to_dnf(const TruthTable& t) { return normal_form(t, true, true); }
BoolExpr to_cnf(const TruthTable& t) { return normal_form(t, false, false); }

// ---------------------------------------------------------------------------
// Outcomes

BoolProjection project_axis(const Axis& a) noexcept {
  constexpr double kHalfPi = kPi / 2.0;
  return {a.theta() < kHalfPi, a.phi() < kHalfPi};
}

Outcome decide_outcome(const BoolExpr& e, const Axis& axis_f, std::span<const HistoryEntry> history) {
  const int depth = e.memory_depth();
  if (history.size() < static_cast<std::size_t>(depth)) {
    throw HistoryError("P function of memory depth " + std::to_string(depth) + " needs " + std::to_string(depth) +
                       " history entries, got " + std::to_string(history.size()));
  }
  const BoolProjection now = project_axis(axis_f);
  std::uint32_t row = 0;
  auto push = [&](bool bit) { row = (row << 1) | (bit ? 1U : 0U); };
  push(now.xi);
  push(now.eta);
  for (int k = 0; k < depth; ++k) {
    const HistoryEntry& h = history[static_cast<std::size_t>(k)];
    push(h.projection.xi);
    push(h.projection.eta);
    push(h.outcome == Outcome::up);
  }
  return e.evaluate(row, depth) ? Outcome::up : Outcome::down;
}

std::string_view to_string(Measure m) noexcept { return m == Measure::chart_uniform ? "chart" : "sphere"; }
std::string_view to_string(ProbabilityMethod m) noexcept {
  return m == ProbabilityMethod::analytic ? "analytic" : "mc";
}

double outcome_probability(const BoolExpr& e, Measure measure, ProbabilityMethod method, std::int64_t samples,
                           std::uint64_t seed) {
  const int depth = e.memory_depth();
  const TruthTable table = to_truth_table(e, depth);
  if (method == ProbabilityMethod::analytic) {
    if (depth != 0) throw UnsupportedError("analytic outcome probability needs a memoryless P function");
    // (xi, eta) is constant on each chart quadrant and both measures give
    // every quadrant weight 1/4.
    return static_cast<double>(table.count_ones()) / 4.0;
  }
  if (samples < 1) throw DomainError("Monte Carlo needs at least one sample");

  constexpr double kHalfPi = kPi / 2.0;
  const int history_bits = 3 * depth;
  const std::uint64_t history_mask = (std::uint64_t{1} << history_bits) - 1;
  std::mt19937_64 gen(seed);
  std::int64_t ups = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    const double u = uniform01(gen);
    const double theta = measure == Measure::chart_uniform ? u * kPi : std::acos(1.0 - 2.0 * u);
    const double phi = uniform01(gen) * kPi;
    std::uint64_t row = (theta < kHalfPi ? 2U : 0U) | (phi < kHalfPi ? 1U : 0U);
    if (history_bits > 0) row = (row << history_bits) | (gen() & history_mask);
    ups += table.at(static_cast<std::size_t>(row)) ? 1 : 0;
  }
  return static_cast<double>(ups) / static_cast<double>(samples);
}

}  // namespace collapse

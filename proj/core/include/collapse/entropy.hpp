#pragma once

#include <numbers>

#include "collapse/bloch.hpp"

namespace collapse {

inline constexpr double kLn2 = std::numbers::ln2;

/// A binary entropy in nats, 0 <= value <= ln 2.
class Entropy {
 public:
  constexpr Entropy() = default;
  /// Throws DomainError if value is outside [0, ln 2 + 1e-12] or not finite.
  explicit Entropy(double nats);

  [[nodiscard]] constexpr double value() const noexcept { return nats_; }

  friend constexpr bool operator==(const Entropy&, const Entropy&) = default;

 private:
  double nats_ = 0.0;
};

/// f(p) = -p ln p - (1 - p) ln(1 - p) with f(0) = f(1) = 0.
/// Throws DomainError for p outside [0, 1].
[[nodiscard]] Entropy binary_entropy(double p);

struct EntropyRoots {
  double p_low;   ///< <= 1/2
  double p_high;  ///< == 1 - p_low
};

/// Both solutions of f(p) = s, by bisection on [0, 1/2].
[[nodiscard]] EntropyRoots entropy_pair_solutions(Entropy s, double tolerance = 1e-12);

struct CollapseEntropies {
  Entropy s_i;
  Entropy s_f;
  Entropy s_up;
};

[[nodiscard]] CollapseEntropies collapse_entropies(const Axis& initial, const Axis& final_axis,
                                                   const SpinState& state);

}  // namespace collapse

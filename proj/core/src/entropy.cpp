#include "collapse/entropy.hpp"

#include <cmath>
#include <string>

#include "collapse/errors.hpp"

namespace collapse {

namespace {

constexpr double kEntropySlack = 1e-12;

double plogp(double p) { return p < 1e-300 ? 0.0 : p * std::log(p); }

}  // namespace

Entropy::Entropy(double nats) : nats_(nats) {
  if (!std::isfinite(nats) || nats < 0.0 || nats > kLn2 + kEntropySlack) {
    throw DomainError("Entropy: value out of [0, ln 2]: " + std::to_string(nats));
  }
}

Entropy binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("binary_entropy: p must lie in [0, 1], got " + std::to_string(p));
  }
  // Evaluate on the smaller of p, 1 - p (1 - p is exact for p >= 1/2), with
  // log1p keeping the complementary term accurate.
  const double u = p <= 0.5 ? p : 1.0 - p;
  const double value = -plogp(u) - (1.0 - u) * std::log1p(-u);
  return Entropy(value < 0.0 ? 0.0 : value);
}

EntropyRoots entropy_pair_solutions(Entropy s, double tolerance) {
  const double target = s.value();
  if (target >= kLn2) return {0.5, 0.5};
  if (target == 0.0) return {0.0, 1.0};

  double lo = 0.0;
  double hi = 0.5;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (binary_entropy(mid).value() < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double p = 0.5 * (lo + hi);
  return {p, 1.0 - p};
}

CollapseEntropies collapse_entropies(const Axis& initial, const Axis& final_axis, const SpinState& state) {
  return {binary_entropy(up_overlap_prob(initial, state)), binary_entropy(up_overlap_prob(final_axis, state)),
          binary_entropy(axes_up_overlap(final_axis, initial))};
}

}  // namespace collapse

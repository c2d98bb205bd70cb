#include <cmath>
#include <random>

#include "collapse/entropy.hpp"
#include "collapse/errors.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace collapse;
using doctest::Approx;

TEST_CASE("binary entropy at fixed points") {
  CHECK(binary_entropy(0.0).value() == 0.0);
  CHECK(binary_entropy(1.0).value() == 0.0);
  CHECK(binary_entropy(0.5).value() == Approx(kLn2).epsilon(1e-15));
  CHECK(binary_entropy(0.4293).value() == Approx(0.6831166).epsilon(1e-7));
  CHECK(binary_entropy(0.02).value() == Approx(0.09803911327973194).epsilon(1e-14));
}

TEST_CASE("binary entropy domain") {
  CHECK_THROWS_AS((void)binary_entropy(-1e-9), DomainError);
  CHECK_THROWS_AS((void)binary_entropy(1.0 + 1e-9), DomainError);
  CHECK_THROWS_AS((void)binary_entropy(NAN), DomainError);
  CHECK_THROWS_AS(Entropy(kLn2 + 1e-6), DomainError);
  CHECK_THROWS_AS(Entropy(-1e-3), DomainError);
}

TEST_CASE("binary entropy matches the textbook formula") {
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 5000; ++k) {
    const double p = u(gen);
    CHECK(binary_entropy(p).value() == Approx(oracle::entropy(p)).epsilon(1e-12));
  }
}

TEST_CASE("entropy_pair_solutions inverts the entropy") {
  const auto r = entropy_pair_solutions(binary_entropy(0.02));
  CHECK(r.p_low == Approx(0.02).epsilon(1e-10));
  CHECK(r.p_high == Approx(0.98).epsilon(1e-10));
  CHECK(r.p_low + r.p_high == Approx(1.0).epsilon(1e-15));

  const auto top = entropy_pair_solutions(Entropy(kLn2));
  CHECK(top.p_low == Approx(0.5).epsilon(1e-6));

  const auto zero = entropy_pair_solutions(Entropy(0.0));
  CHECK(zero.p_low == Approx(0.0).epsilon(1e-12));
  CHECK(zero.p_high == Approx(1.0).epsilon(1e-12));

  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> s(0.0, kLn2);
  for (int k = 0; k < 500; ++k) {
    const double target = s(gen);
    const auto roots = entropy_pair_solutions(Entropy(target));
    CHECK(roots.p_low == Approx(oracle::entropy_inverse_low(target)).epsilon(1e-9));
  }
}

TEST_CASE("collapse_entropies for the reference instance") {
  const auto i = canonicalize_axis(kPi / 4, kPi / 2);
  const auto f = canonicalize_axis(0.8625034052, 1.1972762376);
  const auto e = collapse_entropies(i, f, SpinState::make(0.4, 0.0));
  CHECK(e.s_i.value() == Approx(oracle::entropy(0.4292893218813453)).epsilon(1e-12));
  CHECK(e.s_f.value() == Approx(e.s_i.value()).epsilon(1e-8));
  CHECK(e.s_up.value() == Approx(0.0980391).epsilon(1e-6));
}

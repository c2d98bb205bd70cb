#pragma once

// Spin-1/2 geometry: measurement axes on the restricted chart, pure states,
// eigenvectors, and the overlap probabilities the rest of the library is
// built on.

#include <complex>
#include <cstdint>
#include <numbers>

namespace collapse {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kUnitTolerance = 1e-12;

enum class Outcome : std::uint8_t { down = 0, up = 1 };

[[nodiscard]] constexpr int to_bit(Outcome o) noexcept { return o == Outcome::up ? 1 : 0; }
[[nodiscard]] constexpr Outcome outcome_from_bit(int bit) noexcept {
  return bit != 0 ? Outcome::up : Outcome::down;
}

/// Observer state: the axis of the spin projection being measured, stored on
/// the chart 0 <= theta < pi, 0 <= phi < pi with phi = 0 at the pole.
///
/// The only way to build one is canonicalize_axis(), so every Axis in the
/// program satisfies the chart invariants.
class Axis {
 public:
  Axis() = default;  // north pole

  [[nodiscard]] double theta() const noexcept { return theta_; }
  [[nodiscard]] double phi() const noexcept { return phi_; }
  /// True when canonicalization applied the antipodal map, which exchanges
  /// the up/down eigenvector labels relative to the raw angles.
  [[nodiscard]] bool labels_swapped() const noexcept { return labels_swapped_; }

  friend bool operator==(const Axis&, const Axis&) = default;

 private:
  friend Axis canonicalize_axis(double theta_raw, double phi_raw);
  Axis(double theta, double phi, bool swapped) : theta_(theta), phi_(phi), labels_swapped_(swapped) {}

  double theta_ = 0.0;
  double phi_ = 0.0;
  bool labels_swapped_ = false;
};

/// Electron state (sqrt(rho) e^{-i tau}, sqrt(1 - rho)), global phase fixed so
/// the second amplitude is real and non-negative.
class SpinState {
 public:
  SpinState() = default;  // spin up along z

  /// Throws DomainError unless 0 <= rho <= 1 and tau is finite. tau is reduced
  /// mod 2 pi; it is forced to 0 when rho is 0 or 1.
  static SpinState make(double rho, double tau);

  [[nodiscard]] double rho() const noexcept { return rho_; }
  [[nodiscard]] double tau() const noexcept { return tau_; }

  friend bool operator==(const SpinState&, const SpinState&) = default;

 private:
  SpinState(double rho, double tau) : rho_(rho), tau_(tau) {}

  double rho_ = 1.0;
  double tau_ = 0.0;
};

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;

  [[nodiscard]] double dot(const BlochVector& o) const noexcept { return x * o.x + y * o.y + z * o.z; }
  [[nodiscard]] double norm() const noexcept;
};

struct ComplexPair {
  std::complex<double> first;
  std::complex<double> second;

  [[nodiscard]] double squared_norm() const noexcept { return std::norm(first) + std::norm(second); }
  /// <this|other>
  [[nodiscard]] std::complex<double> inner(const ComplexPair& other) const noexcept {
    return std::conj(first) * other.first + std::conj(second) * other.second;
  }
};

struct EigenPair {
  ComplexPair up;
  ComplexPair down;
};

/// 2x2 complex matrix, row-major: [[a, b], [c, d]].
struct HermitianMatrix2 {
  std::complex<double> a;
  std::complex<double> b;
  std::complex<double> c;
  std::complex<double> d;

  [[nodiscard]] ComplexPair apply(const ComplexPair& v) const noexcept {
    return {a * v.first + b * v.second, c * v.first + d * v.second};
  }
  [[nodiscard]] std::complex<double> trace() const noexcept { return a + d; }
  [[nodiscard]] std::complex<double> determinant() const noexcept { return a * d - b * c; }
  [[nodiscard]] bool is_hermitian(double tol = kUnitTolerance) const noexcept;
};

/// Reduce arbitrary finite angles onto the chart. Angles with theta outside
/// [0, pi] are folded first (same point on the sphere); if the resulting phi
/// is not in [0, pi) the antipodal map (pi - theta, phi + pi) is applied and
/// labels_swapped is set. Poles get phi = 0.
[[nodiscard]] Axis canonicalize_axis(double theta_raw, double phi_raw);

/// Canonical axis along a direction given as a (not necessarily unit) vector.
[[nodiscard]] Axis axis_from_direction(const BlochVector& n);

[[nodiscard]] BlochVector bloch_direction(double theta, double phi) noexcept;
[[nodiscard]] inline BlochVector axis_to_bloch(const Axis& a) noexcept {
  return bloch_direction(a.theta(), a.phi());
}

[[nodiscard]] EigenPair eigenvectors(const Axis& a) noexcept;
[[nodiscard]] HermitianMatrix2 spin_operator(const Axis& a) noexcept;

[[nodiscard]] BlochVector state_to_bloch(const SpinState& s) noexcept;

/// |<up(theta, phi)|psi>|^2 for raw angles (no canonicalization), clamped to [0,1].
[[nodiscard]] double up_overlap_prob_raw(double theta, double phi, const SpinState& s) noexcept;
[[nodiscard]] inline double up_overlap_prob(const Axis& a, const SpinState& s) noexcept {
  return up_overlap_prob_raw(a.theta(), a.phi(), s);
}

/// |<up_f|up_i>|^2 = (1 + n_f . n_i) / 2.
[[nodiscard]] double axes_up_overlap(const Axis& f, const Axis& i) noexcept;

/// The eigenstate of `a` for the given outcome, as a canonical SpinState.
[[nodiscard]] SpinState eigenstate_as_state(const Axis& a, Outcome outcome);

}  // namespace collapse

#include "collapse/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "collapse/errors.hpp"

namespace collapse {

namespace {

double wrap_two_pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double clamp_unit(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace

double BlochVector::norm() const noexcept { return std::sqrt(dot(*this)); }

bool HermitianMatrix2::is_hermitian(double tol) const noexcept {
  return std::abs(a.imag()) <= tol && std::abs(d.imag()) <= tol && std::abs(b - std::conj(c)) <= tol;
}

SpinState SpinState::make(double rho, double tau) {
  if (!std::isfinite(rho) || !std::isfinite(tau)) {
    throw DomainError("SpinState: rho and tau must be finite");
  }
  if (rho < 0.0 || rho > 1.0) {
    throw DomainError("SpinState: rho must lie in [0, 1], got " + std::to_string(rho));
  }
  if (rho == 0.0 || rho == 1.0) return SpinState(rho, 0.0);
  return SpinState(rho, wrap_two_pi(tau));
}

Axis canonicalize_axis(double theta_raw, double phi_raw) {
  if (!std::isfinite(theta_raw) || !std::isfinite(phi_raw)) {
    throw DomainError("canonicalize_axis: angles must be finite");
  }
  double theta = wrap_two_pi(theta_raw);
  double phi = phi_raw;
  if (theta > kPi) {
    // (theta, phi) and (2 pi - theta, phi + pi) name the same point.
    theta = kTwoPi - theta;
    phi += kPi;
  }
  phi = wrap_two_pi(phi);

  if (theta == 0.0) return Axis(0.0, 0.0, false);
  if (theta == kPi) return Axis(0.0, 0.0, true);
  if (phi >= kPi) return Axis(kPi - theta, phi - kPi, true);
  return Axis(theta, phi, false);
}

Axis axis_from_direction(const BlochVector& n) {
  const double r = n.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("axis_from_direction: zero or non-finite vector");
  const double z = std::clamp(n.z / r, -1.0, 1.0);
  const double theta = std::acos(z);
  const double rho_xy = std::hypot(n.x, n.y);
  const double phi = rho_xy == 0.0 ? 0.0 : std::atan2(n.y, n.x);
  return canonicalize_axis(theta, phi);
}

BlochVector bloch_direction(double theta, double phi) noexcept {
  const double st = std::sin(theta);
  return {st * std::cos(phi), st * std::sin(phi), std::cos(theta)};
}

EigenPair eigenvectors(const Axis& a) noexcept {
  const double c = std::cos(a.theta() / 2.0);
  const double s = std::sin(a.theta() / 2.0);
  const std::complex<double> phase = std::polar(1.0, -a.phi());
  return {{c * phase, {s, 0.0}}, {-s * phase, {c, 0.0}}};
}

HermitianMatrix2 spin_operator(const Axis& a) noexcept {
  const double ct = std::cos(a.theta());
  const double st = std::sin(a.theta());
  return {{ct, 0.0}, st * std::polar(1.0, -a.phi()), st * std::polar(1.0, a.phi()), {-ct, 0.0}};
}

BlochVector state_to_bloch(const SpinState& s) noexcept {
  const double k = 2.0 * std::sqrt(s.rho() * (1.0 - s.rho()));
  return {k * std::cos(s.tau()), k * std::sin(s.tau()), 2.0 * s.rho() - 1.0};
}

double up_overlap_prob_raw(double theta, double phi, const SpinState& s) noexcept {
  const double rho = s.rho();
  const double ch = std::cos(theta / 2.0);
  const double sh = std::sin(theta / 2.0);
  return clamp_unit(rho * ch * ch + (1.0 - rho) * sh * sh +
                    std::sqrt(rho * (1.0 - rho)) * std::sin(theta) * std::cos(phi - s.tau()));
}

double axes_up_overlap(const Axis& f, const Axis& i) noexcept {
  return clamp_unit(0.5 * (1.0 + axis_to_bloch(f).dot(axis_to_bloch(i))));
}

SpinState eigenstate_as_state(const Axis& a, Outcome outcome) {
  const double c = std::cos(a.theta() / 2.0);
  const double s = std::sin(a.theta() / 2.0);
  if (outcome == Outcome::up) return SpinState::make(c * c, a.phi());
  return SpinState::make(s * s, a.phi() + kPi);
}

}  // namespace collapse

#pragma once

// Reference computations for the tests. Each one works from first principles
// (complex amplitudes, direct sampling) and shares no code with the library
// beyond the Axis/SpinState value types.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

struct Vec {
  double x, y, z;
};

inline double dot(Vec a, Vec b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec cross(Vec a, Vec b) { return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x}; }
inline Vec scale(Vec a, double k) { return {a.x * k, a.y * k, a.z * k}; }
inline Vec add(Vec a, Vec b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec unit(Vec a) { return scale(a, 1.0 / std::sqrt(dot(a, a))); }

inline Vec direction(double theta, double phi) {
  return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

/// Spin-up eigenvector of n . sigma, written out by hand.
inline std::pair<cplx, cplx> up_ket(double theta, double phi) {
  return {std::cos(theta / 2), std::polar(1.0, phi) * std::sin(theta / 2)};
}

inline std::pair<cplx, cplx> state_ket(double rho, double tau) {
  return {std::polar(std::sqrt(rho), -tau), cplx(std::sqrt(1.0 - rho), 0.0)};
}

/// |<up(theta, phi)|psi>|^2 from the amplitudes.
inline double overlap(double theta, double phi, double rho, double tau) {
  const auto [u0, u1] = up_ket(theta, phi);
  const auto [a, b] = state_ket(rho, tau);
  return std::norm(std::conj(u0) * a + std::conj(u1) * b);
}

/// Bloch vector of psi as expectation values <psi|sigma_k|psi>.
inline Vec bloch(double rho, double tau) {
  const auto [a, b] = state_ket(rho, tau);
  const cplx sx = std::conj(a) * b + std::conj(b) * a;
  const cplx sy = std::conj(a) * (cplx(0, -1) * b) + std::conj(b) * (cplx(0, 1) * a);
  const double sz = std::norm(a) - std::norm(b);
  return {sx.real(), sy.real(), sz};
}

/// Textbook binary entropy, no cancellation tricks.
inline double entropy(double p) {
  double s = 0.0;
  if (p > 0) s -= p * std::log(p);
  if (p < 1) s -= (1 - p) * std::log(1 - p);
  return s;
}

/// Inverse of entropy on [0, 1/2] by plain bisection.
inline double entropy_inverse_low(double s) {
  double lo = 0.0, hi = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (entropy(mid) < s ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Angle between two axes as unoriented lines.
inline double line_angle(Vec a, Vec b) {
  return std::atan2(std::sqrt(dot(cross(a, b), cross(a, b))), std::abs(dot(a, b)));
}

struct CollapseAnswer {
  enum class Kind { normal, death_point, trivial } kind;
  Vec axis;  // unit direction of the chosen final axis
  double s_up = 0.0;
  int arcs_on_chart = 0;  // pieces of the two level circles inside the chart
};

/// Dense scan of the two constraint circles {n : n . m = +-c}, restricted to
/// the hemisphere n_y >= 0. Every arc that comes within eps_z (in entropy or
/// in overlap distance) of the Z point is dropped. On the remaining arcs the
/// interior extrema of the overlap are located on the samples and polished by
/// golden section; the one with the least S_up wins. Arc endpoints on the
/// seam (found by bisection) are used only when no arc has an interior
/// extremum.
inline CollapseAnswer scan_collapse(double theta_i, double phi_i, double rho, double tau, double eps_trivial = 1e-9,
                                    double eps_z = 1e-6, int samples = 200000) {
  const Vec ni = direction(theta_i, phi_i);
  const Vec m = bloch(rho, tau);
  const double p = overlap(theta_i, phi_i, rho, tau);
  if (std::min(p, 1 - p) <= eps_trivial) return {CollapseAnswer::Kind::trivial, ni, 0.0, 0};
  const double c = dot(ni, m);

  Vec u = std::abs(m.z) < 0.9 ? Vec{0, 0, 1} : Vec{1, 0, 0};
  u = unit(add(u, scale(m, -dot(u, m))));
  const Vec v = cross(m, u);

  auto s_of = [&](Vec n) { return entropy(std::clamp((1 + dot(n, ni)) / 2, 0.0, 1.0)); };
  auto zero_like = [&](Vec n) {
    const double ov = std::clamp((1 + dot(n, ni)) / 2, 0.0, 1.0);
    return std::min(ov, 1 - ov) <= eps_z || entropy(ov) <= eps_z;
  };

  struct Best {
    double s = std::numeric_limits<double>::infinity();
    Vec n{0, 0, 1};
    void offer(double s_new, Vec n_new) {
      if (s_new < s) {
        s = s_new;
        n = n_new;
      }
    }
  };
  Best interior, boundary;
  int arcs = 0;
  auto ov_of = [&](Vec n) { return (1 + dot(n, ni)) / 2; };

  for (double sign : {1.0, -1.0}) {
    const double h = sign * c;
    const double r = std::sqrt(std::max(0.0, 1 - h * h));
    auto point = [&](double t) { return add(scale(m, h), add(scale(u, r * std::cos(t)), scale(v, r * std::sin(t)))); };
    std::vector<double> ts(samples);
    std::vector<char> in(samples);
    for (int k = 0; k < samples; ++k) {
      ts[k] = 2 * pi * k / samples;
      in[k] = point(ts[k]).y >= 0;
    }
    // Start the walk outside the chart so no run wraps, unless the whole
    // circle is inside.
    const bool all_in = std::all_of(in.begin(), in.end(), [](char b) { return b != 0; });
    int start = 0;
    if (!all_in) {
      while (in[start]) ++start;
    }
    std::vector<std::vector<double>> runs;
    for (int j = 0; j < samples; ++j) {
      const int k = (start + j) % samples;
      if (!in[k]) continue;
      if (runs.empty() || !in[(k - 1 + samples) % samples] || j == 0) runs.emplace_back();
      // Unwrapped parameter keeps each run increasing.
      runs.back().push_back(2 * pi * (start + j) / samples);
    }
    arcs += static_cast<int>(runs.size());
    const double dt = 2 * pi / samples;

    for (const auto& run : runs) {
      bool dropped = false;
      for (double t : run) dropped = dropped || zero_like(point(t));
      if (dropped) continue;

      // Interior extrema of the overlap along the arc.
      const std::size_t len = run.size();
      for (std::size_t j = 0; j < len; ++j) {
        const bool has_prev = all_in || j > 0;
        const bool has_next = all_in || j + 1 < len;
        if (!has_prev || !has_next) continue;
        const double here = ov_of(point(run[j]));
        const double prev = ov_of(point(run[j] - dt));
        const double next = ov_of(point(run[j] + dt));
        const bool is_max = here >= prev && here > next;
        const bool is_min = here <= prev && here < next;
        if (!is_max && !is_min) continue;
        const double sgn = is_max ? -1.0 : 1.0;  // minimize sgn * overlap
        double lo = run[j] - dt, hi = run[j] + dt;
        const double g = (std::sqrt(5.0) - 1) / 2;
        for (int it = 0; it < 200; ++it) {
          const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
          if (sgn * ov_of(point(a)) < sgn * ov_of(point(b))) hi = b;
          else lo = a;
        }
        const Vec n = point(0.5 * (lo + hi));
        interior.offer(s_of(n), n);
      }

      if (!all_in) {
        for (auto [inside, outside] : {std::pair{run.front(), run.front() - dt}, std::pair{run.back(), run.back() + dt}}) {
          for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (inside + outside);
            (point(mid).y >= 0 ? inside : outside) = mid;
          }
          Vec e = point(inside);
          e.y = 0.0;
          e = unit(e);
          boundary.offer(s_of(e), e);
        }
      }
    }
  }
  const Best& best = std::isfinite(interior.s) ? interior : boundary;
  if (!std::isfinite(best.s)) return {CollapseAnswer::Kind::death_point, ni, 0.0, arcs};
  return {CollapseAnswer::Kind::normal, best.n, best.s, arcs};
}

}  // namespace oracle

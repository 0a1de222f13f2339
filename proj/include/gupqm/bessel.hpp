#pragma once

// Modified Bessel functions of the second kind, K0 and K1, for real z > 0.
//
//   z <= 2       ascending series with the logarithmic term
//   2 < z <= 25  Steed's continued fraction (Temme's CF2)
//   z > 25       Hankel asymptotic expansion

#include <cmath>
#include <numbers>

#include "gupqm/core.hpp"
#include "gupqm/quadrature.hpp"

namespace gupqm {

inline constexpr double kBesselSeriesMax = 2.0;
inline constexpr double kBesselAsymptoticMin = 25.0;

namespace detail {

struct BesselPair {
  double k0, k1;
};

inline BesselPair bessel_k_series(double z) {
  const double y = 0.25 * z * z;
  const double lg = std::log(0.5 * z) + std::numbers::egamma;
  // term_k = y^k / (k!)^2, harmonic H_k; psi(k+1) + psi(k+2) = 2 H_k + 1/(k+1) - 2 gamma.
  double term = 1.0, h = 0.0;
  double i0 = 0.0, s0 = 0.0, i1 = 0.0, s1 = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double t1 = term / (k + 1.0);  // y^k / (k! (k+1)!)
    i0 += term;
    s0 += term * h;
    i1 += t1;
    s1 += t1 * (2.0 * h + 1.0 / (k + 1.0) - 2.0 * std::numbers::egamma);
    if (term < 1e-18 * i0) break;
    term *= y / ((k + 1.0) * (k + 1.0));
    h += 1.0 / (k + 1.0);
  }
  i1 *= 0.5 * z;
  const double k0 = -lg * i0 + s0;
  const double k1 = 1.0 / z + std::log(0.5 * z) * i1 - 0.25 * z * s1;
  return {k0, k1};
}

inline BesselPair bessel_k_cf2(double x) {
  constexpr double a1 = 0.25;  // 1/4 - mu^2 with mu = 0
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double delh = d, h = d;
  double q1 = 0.0, q2 = 1.0;
  double q = a1, c = a1, a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < 1e-17) break;
  }
  h *= a1;
  const double k0 = std::sqrt(kPi / (2.0 * x)) * std::exp(-x) / s;
  const double k1 = k0 * (x + 0.5 - h) / x;
  return {k0, k1};
}

inline double bessel_k_asymptotic(int nu, double z) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (k * 8.0 * z);
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(kPi / (2.0 * z)) * std::exp(-z) * sum;
}

}  // namespace detail

/// K_nu(z) for nu in {0, 1} and z > 0.
inline double bessel_k(int nu, double z) {
  if (nu != 0 && nu != 1) throw DomainError("bessel_k: order must be 0 or 1");
  if (!(z > 0.0) || !std::isfinite(z)) throw DomainError("bessel_k: argument must be positive and finite");
  if (z > kBesselAsymptoticMin) return detail::bessel_k_asymptotic(nu, z);
  const auto p = z <= kBesselSeriesMax ? detail::bessel_k_series(z) : detail::bessel_k_cf2(z);
  return nu == 0 ? p.k0 : p.k1;
}

/// Independent reference: K_nu(z) = \int_0^inf exp(-z cosh t) cosh(nu t) dt by
/// adaptive Gauss-Kronrod, truncated where z (cosh t - 1) exceeds 50.
inline double bessel_k_integral(int nu, double z) {
  if (!(z > 0.0)) throw DomainError("bessel_k_integral: argument must be positive");
  const double t_max = std::acosh(1.0 + 50.0 / z);
  // Scale out exp(-z) so the tolerance is relative to the answer.
  auto f = [nu, z](double t) { return std::exp(-z * (std::cosh(t) - 1.0)) * std::cosh(nu * t); };
  const auto r = integrate_adaptive(f, 0.0, t_max, 0.0, 1e-14, 5000);
  return std::exp(-z) * r.value;
}

}  // namespace gupqm

#pragma once

// Energy-dependent Green's function of the free particle: the Laplace
// transform of the Euclidean kernel,
//
//   G(eps) = \int_0^inf dtau exp(-eps tau) K(qf, q0; T = -i tau),
//
// and its closed form in D = 2. The kernel enters at first order in alpha,
// which is the order at which the closed form is exact.

#include <algorithm>
#include <cmath>

#include "gupqm/bessel.hpp"
#include "gupqm/core.hpp"
#include "gupqm/kernels.hpp"
#include "gupqm/quadrature.hpp"

namespace gupqm {

struct GreenQuery {
  double epsilon = 1.0;
  VecD q0;
  VecD qf;
  ModelParams params;

  void validate() const {
    params.validate();
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw DomainError("green: epsilon must be positive");
    Endpoints{q0, qf, TimeArg::real(1.0)}.validate(params.dim);
    if (params.omega != 0.0) throw DomainError("green: only the free particle is supported (omega = 0)");
  }

  double separation() const { return std::sqrt(norm2(qf - q0)); }

  /// z = sqrt(2 m eps / hbar) |qf - q0|
  double z() const { return std::sqrt(2.0 * params.m * epsilon / params.hbar) * separation(); }
};

/// (m / pi hbar)[(1 + 8 alpha hbar m eps) K0(z) - 2 alpha hbar m eps z K1(z)].
inline double green_free_2d_closed(const GreenQuery& g) {
  g.validate();
  if (g.params.dim != 2) throw DomainError("green_free_2d_closed: requires dim = 2");
  if (g.separation() == 0.0) throw DomainError("green_free_2d_closed: coincident endpoints (K0 diverges)");
  const auto& p = g.params;
  const double z = g.z();
  const double x = p.alpha * p.hbar * p.m * g.epsilon;
  return p.m / (kPi * p.hbar) * ((1.0 + 8.0 * x) * bessel_k(0, z) - 2.0 * x * z * bessel_k(1, z));
}

/// First-order Euclidean free kernel G(tau), read from the kernels module.
inline double euclidean_free_kernel(const ModelParams& p, const VecD& q0, const VecD& qf, double tau) {
  ModelParams free = p;
  free.omega = 0.0;
  return free_kernel(free, Endpoints{q0, qf, TimeArg::euclidean(tau)}).linearized().real();
}

struct LaplaceResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Numerical Laplace transform of the Euclidean free kernel in any dimension.
/// Substitutes tau = e^u, splits at the maximum of the alpha = 0 integrand and
/// cuts both tails where the exponent has dropped by more than ~80.
inline LaplaceResult laplace_numeric(const GreenQuery& g, double rel_tol = 1e-12) {
  g.validate();
  const auto& p = g.params;
  const double r2 = norm2(g.qf - g.q0);
  // At coincidence the O(alpha) terms make the small-tau end non-integrable.
  if (r2 == 0.0) throw DomainError("laplace_numeric: coincident endpoints");
  const double A = p.m * r2 / (2.0 * p.hbar);  // exponent -A/tau - eps tau
  const double eps = g.epsilon;
  const double tau_peak = std::sqrt(A / eps);
  const double margin = 2.0 * std::sqrt(A * eps) + 80.0;
  const double u_lo = std::log(A / margin);
  const double u_hi = std::log(margin / eps);
  const double u_peak = std::clamp(std::log(tau_peak), u_lo, u_hi);

  auto integrand = [&](double u) {
    const double tau = std::exp(u);
    return tau * std::exp(-eps * tau) * euclidean_free_kernel(p, g.q0, g.qf, tau);
  };
  const auto left = integrate_adaptive(integrand, u_lo, u_peak, 0.0, rel_tol, 4000);
  const auto right = integrate_adaptive(integrand, u_peak, u_hi, 0.0, rel_tol, 4000);
  return {left.value + right.value, left.error + right.error, left.intervals + right.intervals};
}

}  // namespace gupqm

#pragma once

// Closed-form O(alpha) propagators
//
//   K = N(T) [1 + alpha f] exp(i (S0 + alpha S1) / hbar)
//
// for the D-dimensional free particle (N = (m / 2 pi i hbar T)^{D/2}) and
// isotropic oscillator (N = (m w / 2 pi i hbar sin wT)^{D/2}). Time may be
// real or Euclidean (T = -i tau); all powers use the principal branch.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gupqm/classical.hpp"
#include "gupqm/core.hpp"
#include "gupqm/gauss_moments.hpp"
#include "gupqm/multipoly.hpp"

namespace gupqm {

/// Integer coefficients of the free-kernel bracket
/// 1 + D(D+2) i alpha hbar m / T - 2(D+2) alpha m^2 |dq|^2 / T^2.
struct FreeBracketCoefficients {
  long long constant;    ///< D(D+2)
  long long separation;  ///< 2(D+2)
};

constexpr FreeBracketCoefficients free_bracket_coefficients(int dim) {
  return {static_cast<long long>(dim) * (dim + 2), 2LL * (dim + 2)};
}

static_assert(free_bracket_coefficients(2).constant == 8 && free_bracket_coefficients(2).separation == 8);

/// Exact rational number, used for the beta constants.
struct Rational {
  long long num;
  long long den;
  constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  constexpr bool operator==(const Rational&) const = default;
};

constexpr Rational reduce(Rational r) {
  long long a = r.num < 0 ? -r.num : r.num, b = r.den;
  while (b != 0) {
    const long long t = a % b;
    a = b;
    b = t;
  }
  return a == 0 ? Rational{0, 1} : Rational{r.num / a, r.den / a};
}

struct CanonicalBetas {
  Rational beta1, beta2, beta3;
};

/// beta1 = D(D+2)/8, beta2 = -(D+2)/8, beta3 = 1.
constexpr CanonicalBetas canonical_betas(int dim) {
  return {reduce({static_cast<long long>(dim) * (dim + 2), 8}), reduce({-(dim + 2LL), 8}), {1, 1}};
}

static_assert(canonical_betas(2).beta1 == Rational{1, 1} && canonical_betas(2).beta2 == Rational{-1, 2});
static_assert(canonical_betas(1).beta1 == Rational{3, 8} && canonical_betas(1).beta2 == Rational{-3, 8});

/// Constants of the oscillator prefactor ansatz. Non-canonical values exist
/// so the composition check can show they fail.
struct PrefactorSpec {
  double beta1 = 1.0;
  double beta2 = -0.5;
  double beta3 = 1.0;

  static PrefactorSpec canonical(int dim) {
    const auto b = canonical_betas(dim);
    return {b.beta1.value(), b.beta2.value(), b.beta3.value()};
  }

  bool operator==(const PrefactorSpec&) const = default;
};

/// O(alpha) prefactor f of the oscillator ansatz, generic over the invariant type.
template <class R>
R sho_prefactor_expr(const ModelParams& p, Complex t, const PairInvariants<R>& v, const PrefactorSpec& spec) {
  const Complex wt = p.omega * t;
  const Complex s = checked_sin(wt);
  const Complex c = std::cos(wt);
  const Complex c2 = std::cos(2.0 * wt);
  const Complex constant = spec.beta1 * kI * p.hbar * p.m * p.omega / (s * s) * (2.0 * wt + 5.0 * s * c + wt * c2);
  const Complex lead = spec.beta2 * p.m * p.m * p.omega * p.omega / (s * s * s);
  const R sum = v.n0 + v.nf;
  R bracket = (2.0 * wt) * ((3.0 * c) * sum - (2.0 * (2.0 + c2)) * v.dot);
  bracket += (10.0 * s) * (sum - (2.0 * c) * v.dot);
  bracket -= (6.0 * spec.beta3 * s * s * s) * sum;
  return lead * bracket + constant;
}

/// O(alpha) prefactor of the free kernel.
template <class R>
R free_prefactor_expr(const ModelParams& p, Complex t, const PairInvariants<R>& v) {
  const auto k = free_bracket_coefficients(p.dim);
  const Complex constant = static_cast<double>(k.constant) * kI * p.hbar * p.m / t;
  const Complex lead = -static_cast<double>(k.separation) * p.m * p.m / (t * t);
  return lead * v.separation2() + constant;
}

/// (m / 2 pi i hbar T)^{D/2}
inline Complex free_leading_prefactor(const ModelParams& p, Complex t) {
  return principal_pow(p.m / (2.0 * kPi * kI * p.hbar * t), 0.5 * p.dim);
}

/// (m w / 2 pi i hbar sin wT)^{D/2}
inline Complex sho_leading_prefactor(const ModelParams& p, Complex t) {
  return principal_pow(p.m * p.omega / (2.0 * kPi * kI * p.hbar * checked_sin(p.omega * t)), 0.5 * p.dim);
}

enum class KernelSystem { free, sho };

inline std::string to_string(KernelSystem s) { return s == KernelSystem::free ? "free" : "sho"; }

/// Exponent and first-order factor of a kernel, generic over invariant type:
///   K = N exp(phase) (1 + alpha first_order) + O(alpha^2),
/// phase = i S0 / hbar, first_order = f + i S1 / hbar.
template <class R>
struct KernelExpansion {
  R phase;
  R f;
  R s1;

  R first_order(double hbar) const { return f + (kI / hbar) * s1; }
};

template <class R>
KernelExpansion<R> kernel_expansion(KernelSystem sys, const ModelParams& p, Complex t, const PairInvariants<R>& v,
                                    const PrefactorSpec& spec) {
  if (sys == KernelSystem::free)
    return {(kI / p.hbar) * free_s0_expr(p.m, t, v), free_prefactor_expr(p, t, v), free_s1_expr(p.m, t, v)};
  return {(kI / p.hbar) * sho_s0_expr(p.m, p.omega, t, v), sho_prefactor_expr(p, t, v, spec),
          sho_s1_expr(p.m, p.omega, t, v)};
}

inline Complex leading_prefactor(KernelSystem sys, const ModelParams& p, Complex t) {
  return sys == KernelSystem::free ? free_leading_prefactor(p, t) : sho_leading_prefactor(p, t);
}

struct KernelValue {
  Complex amplitude;
  Complex leading_prefactor;
  Complex f_alpha;
  Complex S0;
  Complex S1;
  ModelParams params;
  Endpoints endpoints;
  std::vector<std::string> notes;

  /// N exp(i S0/hbar) (1 + alpha (f + i S1/hbar)): the kernel truncated at first order.
  Complex linearized() const {
    return leading_prefactor * std::exp(kI * S0 / params.hbar) *
           (1.0 + params.alpha * first_order_coefficient());
  }
  Complex first_order_coefficient() const { return f_alpha + kI * S1 / params.hbar; }

  /// Recomposes N (1 + alpha f) exp(i(S0 + alpha S1)/hbar).
  Complex recomposed() const {
    return leading_prefactor * (1.0 + params.alpha * f_alpha) *
           std::exp(kI * (S0 + params.alpha * S1) / params.hbar);
  }
};

namespace detail {

inline KernelValue assemble(KernelSystem sys, const ModelParams& p, const Endpoints& e, const PrefactorSpec& spec) {
  const Complex t = e.time.value();
  const auto v = pair_invariants(e.q0, e.qf);
  const PairInvariants<Complex> cv{v.n0, v.nf, v.dot};
  const auto x = kernel_expansion(sys, p, t, cv, spec);
  KernelValue k{};
  k.leading_prefactor = leading_prefactor(sys, p, t);
  k.f_alpha = x.f;
  k.S0 = x.phase * p.hbar / kI;
  k.S1 = x.s1;
  k.params = p;
  k.endpoints = e;
  k.amplitude = k.recomposed();
  return k;
}

}  // namespace detail

inline KernelValue free_kernel(const ModelParams& p, const Endpoints& e) {
  p.validate();
  e.validate(p.dim);
  return detail::assemble(KernelSystem::free, p, e, PrefactorSpec{});
}

/// Oscillator prefactor f (the coefficient of alpha in the bracket).
inline Complex sho_prefactor(const ModelParams& p, const Endpoints& e, const PrefactorSpec& spec) {
  p.validate();
  e.validate(p.dim);
  if (p.omega <= 0.0) throw DomainError("sho_prefactor: omega must be positive");
  const auto v = pair_invariants(e.q0, e.qf);
  return sho_prefactor_expr(p, e.time.value(), PairInvariants<Complex>{v.n0, v.nf, v.dot}, spec);
}

inline KernelValue sho_kernel(const ModelParams& p, const Endpoints& e,
                              const PrefactorSpec& spec) {
  p.validate();
  e.validate(p.dim);
  if (p.omega <= 0.0) throw DomainError("sho_kernel: omega must be positive (use free_kernel)");
  return detail::assemble(KernelSystem::sho, p, e, spec);
}

inline KernelValue sho_kernel(const ModelParams& p, const Endpoints& e) {
  return sho_kernel(p, e, PrefactorSpec::canonical(p.dim));
}

/// Free kernel built from plane waves: the first-order expansion of
/// exp(-i alpha hbar^3 |k|^4 T / m) leaves a degree-4 polynomial times a
/// Gaussian in k, integrated exactly by the moment engine. The O(alpha)
/// phase is folded into f_alpha (S1 = 0), so only the linearized amplitude is
/// comparable with free_kernel.
inline KernelValue free_kernel_spectral(const ModelParams& p, const Endpoints& e) {
  p.validate();
  e.validate(p.dim);
  if (p.dim > kMaxPolyVars) throw DomainError("free_kernel_spectral: dimension too large for moment engine");
  const Complex t = e.time.value();
  const auto d = displacement(e);

  // exp(i k.dq - i hbar T |k|^2 / 2m) = exp(-a |k|^2 + 2 b.k)
  const Complex a = kI * p.hbar * t / (2.0 * p.m);
  CVec b(d.delta.size());
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = 0.5 * kI * d.delta[i];
  const GaussianWeight w(a, b);

  const MultiPoly k2 = MultiPoly::norm2(p.dim);
  const MultiPoly quartic = (-kI * p.hbar * p.hbar * p.hbar * t / p.m) * (k2 * k2);
  const Complex plane_wave_norm = std::pow(2.0 * kPi, -static_cast<double>(p.dim));
  const Complex i0 = plane_wave_norm * integrate_poly_gaussian(MultiPoly::constant(p.dim, 1.0), w);
  const Complex i1 = plane_wave_norm * integrate_poly_gaussian(quartic, w);

  KernelValue k{};
  k.params = p;
  k.endpoints = e;
  k.leading_prefactor = plane_wave_norm * principal_pow(kPi / a, 0.5 * p.dim);
  k.S0 = -kI * p.hbar * (w.b_squared() / a);  // exp(|b|^2/a) = exp(i S0 / hbar)
  k.S1 = 0.0;
  k.f_alpha = i1 / i0;
  k.amplitude = k.recomposed();
  return k;
}

/// Below this omega T, kernel() uses the free form and cross-checks it
/// against the oscillator form.
inline constexpr double kSmallOmegaT = 1e-6;

/// Dispatches on omega: 0 selects the free kernel, tiny omega T uses the free
/// form (exact to O((wT)^2)) with a consistency note, otherwise the oscillator.
inline KernelValue kernel(const ModelParams& p, const Endpoints& e) {
  p.validate();
  if (p.omega == 0.0) return free_kernel(p, e);
  const double wt = p.omega * std::abs(e.time.value());
  if (wt >= kSmallOmegaT) return sho_kernel(p, e);

  KernelValue k = free_kernel(p, e);
  k.notes.push_back("omega T below " + std::to_string(kSmallOmegaT) + ": free-particle form used");
  if (std::abs(std::sin(wt)) >= kCausticThreshold) {
    const KernelValue osc = sho_kernel(p, e);
    const double rel = std::abs(osc.amplitude - k.amplitude) / std::abs(k.amplitude);
    if (rel > 1e-6)
      k.notes.push_back("small omega T: oscillator and free forms differ by " + std::to_string(rel));
  }
  return k;
}

}  // namespace gupqm

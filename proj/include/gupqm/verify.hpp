#pragma once

// Executable consistency laws for the first-order kernels: composition
// (analytic and by quadrature), the Delta S bookkeeping, the time-dependent
// Schrodinger residual and the delta-function initial condition.
//
// Every comparison is made between first-order-truncated quantities. The
// closed-form kernels carry O(alpha^2) pieces through exp(i alpha S1 / hbar);
// those are not part of the claims being checked and would otherwise set a
// floor of order alpha^2 on every residual.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gupqm/classical.hpp"
#include "gupqm/core.hpp"
#include "gupqm/gauss_moments.hpp"
#include "gupqm/kernels.hpp"
#include "gupqm/multipoly.hpp"

namespace gupqm {

struct ResidualReport {
  double residual_norm = 0.0;
  double reference_norm = 0.0;
  double alpha_used = 0.0;
  std::optional<double> scaling_ratio;
  /// Named auxiliary measurements, in a fixed order.
  std::vector<std::pair<std::string, double>> diagnostics;

  double relative() const { return reference_norm > 0.0 ? residual_norm / reference_norm : residual_norm; }
};

/// T = T1 + T2 with the intermediate point integrated over R^D.
struct CompositionSplit {
  Endpoints endpoints;  ///< q0, qf and the total time T
  TimeArg t1 = TimeArg::real(0.5);

  TimeArg t2() const { return endpoints.time - t1; }

  void validate(const ModelParams& p) const {
    endpoints.validate(p.dim);
    if (t1.kind() != endpoints.time.kind()) throw DomainError("composition split: T1 and T must be the same kind");
    (void)t2();  // throws when T2 = 0
    if (p.omega > 0.0) {
      checked_sin(p.omega * t1.value());
      checked_sin(p.omega * t2().value());
      checked_sin(p.omega * endpoints.time.value());
    }
  }
};

inline KernelSystem system_of(const ModelParams& p) { return p.omega > 0.0 ? KernelSystem::sho : KernelSystem::free; }

inline KernelValue evaluate_kernel(const ModelParams& p, const Endpoints& e, const PrefactorSpec& spec) {
  return p.omega > 0.0 ? sho_kernel(p, e, spec) : free_kernel(p, e);
}

// ---- Delta S ----------------------------------------------------------------

/// Gaussian weight of the composition integral: for the oscillator
///   a = -(i m w / 2 hbar) sin wT / (sin wT1 sin wT2),
///   b = -(i m w / 2 hbar)(qf sin wT1 + q0 sin wT2) / (sin wT1 sin wT2),
/// and its w -> 0 limit for the free particle.
inline GaussianWeight composition_weight(const ModelParams& p, const CompositionSplit& s) {
  const Complex t1 = s.t1.value(), t2 = s.t2().value();
  const auto& q0 = s.endpoints.q0;
  const auto& qf = s.endpoints.qf;
  CVec b(q0.size());
  if (p.omega > 0.0) {
    const Complex s1 = checked_sin(p.omega * t1), s2 = checked_sin(p.omega * t2);
    const Complex st = std::sin(p.omega * (t1 + t2));
    const Complex g = -kI * p.m * p.omega / (2.0 * p.hbar) / (s1 * s2);
    for (std::size_t i = 0; i < b.size(); ++i) b[i] = g * (qf[i] * s1 + q0[i] * s2);
    return {g * st, std::move(b)};
  }
  const Complex g = -kI * p.m / (2.0 * p.hbar);
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = g * (qf[i] / t2 + q0[i] / t1);
  return {g * (1.0 / t1 + 1.0 / t2), std::move(b)};
}

/// Delta S from the closed formula (general D, including the mirrored block).
inline Complex delta_S(const ModelParams& p, const CompositionSplit& s) {
  p.validate();
  s.validate(p);
  if (p.omega <= 0.0) throw DomainError("delta_S: omega must be positive");
  const GaussianWeight w = composition_weight(p, s);
  const Complex a = w.a();
  const Complex b2 = w.b_squared();
  const double d = p.dim;

  auto block = [&](Complex t, const VecD& q) {
    const Complex wt = p.omega * t;
    const Complex sn = std::sin(wt);
    Complex qb{};
    for (std::size_t i = 0; i < q.size(); ++i) qb += q[i] * w.b()[i];
    const double q2 = norm2(q);
    const Complex quartic = 12.0 * wt + 8.0 * std::sin(2.0 * wt) + std::sin(4.0 * wt);
    const Complex mixed = 12.0 * wt * std::cos(wt) + 11.0 * sn + 3.0 * std::sin(3.0 * wt);
    const Complex cross = 4.0 * wt + 2.0 * wt * std::cos(2.0 * wt) + 5.0 * std::sin(2.0 * wt);
    const Complex lead = -(d + 2.0) * std::pow(p.m * p.omega, 3) / (32.0 * sn * sn * sn * sn);
    return lead * (quartic / (a * a) * (d / 4.0 + b2 / a) - 2.0 * mixed * qb / (a * a) + 2.0 * cross * q2 / a);
  };
  return block(s.t1.value(), s.endpoints.q0) + block(s.t2().value(), s.endpoints.qf);
}

namespace detail {

/// Invariants of (q, x) with q symbolic in `dim` variables and x fixed.
inline PairInvariants<MultiPoly> symbolic_first(int dim, const VecD& x) {
  CVec xc(x.begin(), x.end());
  return {MultiPoly::norm2(dim), MultiPoly::constant(dim, norm2(x)), MultiPoly::linear(xc)};
}

/// Invariants of (x, q) with q symbolic.
inline PairInvariants<MultiPoly> symbolic_second(int dim, const VecD& x) {
  CVec xc(x.begin(), x.end());
  return {MultiPoly::constant(dim, norm2(x)), MultiPoly::norm2(dim), MultiPoly::linear(xc)};
}

}  // namespace detail

struct DeltaSCheck {
  Complex formula;
  Complex engine;  ///< \int (S1 + S1) w / \int w - S1(qf, q0; T)
};

/// Delta S by the closed formula and by the moment engine.
inline DeltaSCheck delta_S_check(const ModelParams& p, const CompositionSplit& s) {
  const Complex formula = delta_S(p, s);
  const int d = p.dim;
  const auto& e = s.endpoints;
  const GaussianWeight w = composition_weight(p, s);
  // K(q, q0; T1): q plays the final point. K(qf, q; T2): q plays the initial point.
  const MultiPoly s1 = sho_s1_expr(p.m, p.omega, s.t1.value(), detail::symbolic_second(d, e.q0)) +
                       sho_s1_expr(p.m, p.omega, s.t2().value(), detail::symbolic_first(d, e.qf));
  const Complex ratio = integrate_poly_gaussian(s1, w) / w.normalization();
  const Complex direct = sho_s1_expr(p.m, p.omega, e.time.value(), pair_invariants(e.q0, e.qf));
  return {formula, ratio - direct};
}

// ---- composition ------------------------------------------------------------

/// First-order kernel pieces with one endpoint symbolic.
struct SymbolicKernel {
  Complex prefactor;      ///< leading N(T)
  MultiPoly phase;        ///< i S0 / hbar
  MultiPoly first_order;  ///< f + i S1 / hbar
};

inline SymbolicKernel symbolic_kernel(KernelSystem sys, const ModelParams& p, Complex t,
                                      const PairInvariants<MultiPoly>& v, const PrefactorSpec& spec) {
  const auto x = kernel_expansion(sys, p, t, v, spec);
  return {leading_prefactor(sys, p, t), x.phase, x.first_order(p.hbar)};
}

/// \int dq K(qf, q; T2) K(q, q0; T1) expanded to first order in alpha and
/// integrated exactly, compared with the first-order K(qf, q0; T).
inline ResidualReport composition_check_analytic(const ModelParams& p, const CompositionSplit& s,
                                                 const PrefactorSpec& spec) {
  p.validate();
  s.validate(p);
  const int d = p.dim;
  if (d > kMaxPolyVars) throw DomainError("composition_check_analytic: dimension too large");
  const auto sys = system_of(p);
  const auto& e = s.endpoints;

  const auto k1 = symbolic_kernel(sys, p, s.t1.value(), detail::symbolic_second(d, e.q0), spec);
  const auto k2 = symbolic_kernel(sys, p, s.t2().value(), detail::symbolic_first(d, e.qf), spec);
  const auto g = extract_gaussian(k1.phase + k2.phase);
  const MultiPoly correction = k1.first_order + k2.first_order;
  if (correction.degree() > kMaxPolyDegree) throw DegreeOverflow(correction.degree());

  const Complex common = k1.prefactor * k2.prefactor * std::exp(g.constant);
  const Complex i0 = integrate_poly_gaussian(MultiPoly::constant(d, 1.0), g.weight);
  const Complex i1 = integrate_poly_gaussian(correction, g.weight);
  const Complex lhs = common * (i0 + p.alpha * i1);
  const KernelValue direct = evaluate_kernel(p, e, spec);
  const Complex rhs = direct.linearized();
  const Complex rhs0 = direct.leading_prefactor * std::exp(kI * direct.S0 / p.hbar);

  // The weight read off the symbolic exponent must equal the closed form.
  const GaussianWeight ref = composition_weight(p, s);
  double b_mismatch = 0.0;
  for (int i = 0; i < d; ++i)
    b_mismatch = std::max(b_mismatch, std::abs(g.weight.b()[static_cast<std::size_t>(i)] -
                                               ref.b()[static_cast<std::size_t>(i)]));

  ResidualReport r;
  r.residual_norm = std::abs(lhs - rhs);
  r.reference_norm = std::abs(rhs);
  r.alpha_used = p.alpha;
  r.diagnostics = {
      {"weight_a_rel_mismatch", std::abs(g.weight.a() - ref.a()) / std::abs(ref.a())},
      {"weight_b_abs_mismatch", b_mismatch},
      {"zeroth_order_rel_residual", std::abs(common * i0 - rhs0) / std::abs(rhs0)},
  };
  return r;
}

inline ResidualReport composition_check_analytic(const ModelParams& p, const CompositionSplit& s) {
  return composition_check_analytic(p, s, PrefactorSpec::canonical(p.dim));
}

namespace detail {

/// First-order product of two numerically evaluated kernels, split so the
/// Gaussian part can be handed to the quadrature weight.
struct NumericProduct {
  Complex gaussian;    ///< N1 N2 exp(i (S0_1 + S0_2) / hbar)
  Complex correction;  ///< 1 + alpha (F1 + F2)
};

inline NumericProduct numeric_product(const ModelParams& p, const CompositionSplit& s, const VecD& q,
                                      const PrefactorSpec& spec) {
  const auto& e = s.endpoints;
  const KernelValue a = evaluate_kernel(p, Endpoints{e.q0, q, s.t1}, spec);
  const KernelValue b = evaluate_kernel(p, Endpoints{q, e.qf, s.t2()}, spec);
  const Complex g = a.leading_prefactor * b.leading_prefactor * std::exp(kI * (a.S0 + b.S0) / p.hbar);
  return {g, 1.0 + p.alpha * (a.first_order_coefficient() + b.first_order_coefficient())};
}

}  // namespace detail

/// Euclidean composition by tensor Gauss-Hermite quadrature over the
/// intermediate point, using only pointwise kernel evaluations. The Gaussian
/// weight is fitted from three samples of the alpha = 0 integrand per axis.
inline ResidualReport composition_check_quadrature(const ModelParams& p, const CompositionSplit& s, int nodes,
                                                   const PrefactorSpec& spec) {
  p.validate();
  s.validate(p);
  if (!s.endpoints.time.is_euclidean()) throw DomainError("composition_check_quadrature: Euclidean time required");
  if (p.dim > 2) throw DomainError("composition_check_quadrature: dim must be <= 2");
  if (nodes < 32) throw DomainError("composition_check_quadrature: nodes must be >= 32");
  const int d = p.dim;
  const auto& e = s.endpoints;

  // log g(q) = c - a |q|^2 + 2 b.q for the zeroth-order product: probe 0, +-u_i.
  auto log_gauss = [&](const VecD& q) { return std::log(detail::numeric_product(p, s, q, spec).gaussian.real()); };
  const VecD origin(static_cast<std::size_t>(d));
  const double f0 = log_gauss(origin);
  double a_fit = 0.0;
  CVec b_fit(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    VecD up = origin, dn = origin;
    up[static_cast<std::size_t>(i)] = 1.0;
    dn[static_cast<std::size_t>(i)] = -1.0;
    const double fu = log_gauss(up), fd = log_gauss(dn);
    a_fit += (2.0 * f0 - fu - fd) / 2.0 / d;
    b_fit[static_cast<std::size_t>(i)] = (fu - fd) / 4.0;
  }
  const GaussianWeight w(a_fit, b_fit);

  auto integrand = [&](std::span<const double> q) {
    VecD x(std::vector<double>(q.begin(), q.end()));
    const auto prod = detail::numeric_product(p, s, x, spec);
    Complex expo = 0.0;
    for (int i = 0; i < d; ++i) expo += -a_fit * q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i)] +
                                        2.0 * b_fit[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(i)];
    return prod.gaussian * prod.correction * std::exp(-expo);
  };
  const Complex lhs = quadrature_oracle_fn(integrand, w, nodes);
  const Complex rhs = evaluate_kernel(p, e, spec).linearized();

  ResidualReport r;
  r.residual_norm = std::abs(lhs - rhs);
  r.reference_norm = std::abs(rhs);
  r.alpha_used = p.alpha;
  r.diagnostics = {{"nodes", static_cast<double>(nodes)}, {"fitted_a", a_fit}};
  return r;
}

inline ResidualReport composition_check_quadrature(const ModelParams& p, const CompositionSplit& s, int nodes) {
  return composition_check_quadrature(p, s, nodes, PrefactorSpec::canonical(p.dim));
}

// ---- Schrodinger residual ---------------------------------------------------

struct FdSteps {
  double h_q = 0.0;  ///< 0 selects 1e-2 times the characteristic length
  double h_t = 0.0;  ///< 0 selects 1e-3 times |T|
};

/// sqrt(hbar / m w) for the oscillator, sqrt(hbar |T| / m) for the free particle.
inline double characteristic_length(const ModelParams& p, const TimeArg& t) {
  return p.omega > 0.0 ? std::sqrt(p.hbar / (p.m * p.omega)) : std::sqrt(p.hbar * std::abs(t.magnitude()) / p.m);
}

namespace detail {

struct SchrodingerParts {
  Complex residual;
  Complex amplitude;
};

/// [i hbar d/dT - H] K at (qf, q0; T) with
/// H = -(hbar^2/2m) lap + (alpha hbar^4/m) lap^2 + (m w^2/2)|qf|^2 acting on qf.
inline SchrodingerParts schrodinger_parts(const ModelParams& p, const Endpoints& e, double hq, double ht) {
  const auto spec = PrefactorSpec::canonical(p.dim);
  auto K = [&](const VecD& qf, const TimeArg& t) { return evaluate_kernel(p, Endpoints{e.q0, qf, t}, spec).amplitude; };
  const std::size_t d = e.qf.size();
  const Complex k0 = K(e.qf, e.time);

  // d/dT along the ray of T (real or -i tau), central differences + one Richardson level.
  const double mag = e.time.magnitude();
  const Complex dir = e.time.value() / mag;  // dT / d(magnitude)
  auto central = [&](double h) {
    return (K(e.qf, e.time.scaled((mag + h) / mag)) - K(e.qf, e.time.scaled((mag - h) / mag))) / (2.0 * h);
  };
  const Complex dk_dmag = (4.0 * central(0.5 * ht) - central(ht)) / 3.0;
  const Complex dk_dt = dk_dmag / dir;

  auto shifted = [&](std::initializer_list<std::pair<std::size_t, double>> moves) {
    VecD q = e.qf;
    for (const auto& [axis, dx] : moves) q[axis] += dx;
    return K(q, e.time);
  };

  Complex lap{}, bilap{};
  std::vector<Complex> second(d);
  for (std::size_t i = 0; i < d; ++i) {
    const Complex p1 = shifted({{i, hq}}), m1 = shifted({{i, -hq}});
    const Complex p2 = shifted({{i, 2 * hq}}), m2 = shifted({{i, -2 * hq}});
    // Fourth-order 5-point second derivative; second-order 5-point fourth derivative.
    lap += (-p2 + 16.0 * p1 - 30.0 * k0 + 16.0 * m1 - m2) / (12.0 * hq * hq);
    bilap += (p2 - 4.0 * p1 + 6.0 * k0 - 4.0 * m1 + m2) / (hq * hq * hq * hq);
  }
  // 9-point mixed derivative d_i^2 d_j^2.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) {
      Complex mixed{};
      for (int si = -1; si <= 1; ++si)
        for (int sj = -1; sj <= 1; ++sj) {
          const double wi = si == 0 ? -2.0 : 1.0, wj = sj == 0 ? -2.0 : 1.0;
          mixed += wi * wj * shifted({{i, si * hq}, {j, sj * hq}});
        }
      bilap += 2.0 * mixed / (hq * hq * hq * hq);
    }

  const double h2 = p.hbar * p.hbar;
  const Complex h_k = -h2 / (2.0 * p.m) * lap + p.alpha * h2 * h2 / p.m * bilap +
                      0.5 * p.m * p.omega * p.omega * norm2(e.qf) * k0;
  return {kI * p.hbar * dk_dt - h_k, k0};
}

}  // namespace detail

/// Relative Schrodinger residual |[i hbar d_T - H] K| / |K| of the closed-form
/// kernel. The alpha part R(alpha) - R(0) removes the finite-difference floor;
/// its ratio between alpha and alpha / 2 is reported as the scaling ratio.
inline ResidualReport schrodinger_residual(const ModelParams& p, const Endpoints& e, FdSteps steps = {}) {
  p.validate();
  e.validate(p.dim);
  const double hq = steps.h_q > 0.0 ? steps.h_q : 1e-2 * characteristic_length(p, e.time);
  const double ht = steps.h_t > 0.0 ? steps.h_t : 1e-3 * std::abs(e.time.magnitude());

  auto at = [&](double alpha) {
    ModelParams q = p;
    q.alpha = alpha;
    return detail::schrodinger_parts(q, e, hq, ht);
  };
  const auto full = at(p.alpha);
  const auto base = at(0.0);
  const double scale = std::abs(full.amplitude);

  ResidualReport r;
  r.residual_norm = std::abs(full.residual);
  r.reference_norm = scale;
  r.alpha_used = p.alpha;
  const double alpha_part = std::abs(full.residual - base.residual);
  r.diagnostics = {{"h_q", hq},
                   {"h_t", ht},
                   {"fd_floor_rel", std::abs(base.residual) / std::abs(base.amplitude)},
                   {"alpha_part_rel", alpha_part / scale}};
  if (p.alpha > 0.0) {
    const auto half = at(0.5 * p.alpha);
    const double half_part = std::abs(half.residual - base.residual);
    if (half_part > 0.0) r.scaling_ratio = alpha_part / half_part;
  }
  return r;
}

// ---- delta-function initial condition --------------------------------------

/// Normalized Gaussian test function (2 pi width^2)^{-D/2} exp(-|q - center|^2 / 2 width^2).
struct TestFunction {
  VecD center;
  double width = 1.0;

  double operator()(const VecD& q) const {
    const double d = static_cast<double>(center.size());
    return std::pow(2.0 * kPi * width * width, -0.5 * d) * std::exp(-norm2(q - center) / (2.0 * width * width));
  }
};

namespace detail {

/// \int d^Dq0 K_lin(qf, q0; -i tau) g(q0), or \int K_lin when g is absent.
inline Complex smeared_kernel(const ModelParams& p, const VecD& qf, double tau, const std::optional<TestFunction>& g) {
  const int d = p.dim;
  const auto sys = system_of(p);
  const Complex t = TimeArg::euclidean(tau).value();
  const auto k = symbolic_kernel(sys, p, t, symbolic_first(d, qf), PrefactorSpec::canonical(d));
  MultiPoly exponent = k.phase;
  Complex scale = k.prefactor;
  if (g) {
    // -|q - c|^2 / 2 s^2 = -|q|^2 / 2 s^2 + q.c / s^2 - |c|^2 / 2 s^2
    const double inv = 1.0 / (2.0 * g->width * g->width);
    CVec lin(g->center.begin(), g->center.end());
    for (auto& c : lin) c *= 2.0 * inv;
    exponent += (-inv) * MultiPoly::norm2(d) + MultiPoly::linear(lin);
    exponent += Complex(-inv * norm2(g->center));
    scale *= std::pow(2.0 * kPi * g->width * g->width, -0.5 * d);
  }
  const auto gauss = extract_gaussian(exponent);
  const Complex i0 = integrate_poly_gaussian(MultiPoly::constant(d, 1.0), gauss.weight);
  const Complex i1 = integrate_poly_gaussian(k.first_order, gauss.weight);
  return scale * std::exp(gauss.constant) * (i0 + p.alpha * i1);
}

}  // namespace detail

/// Smears the Euclidean first-order kernel against a normalized Gaussian and
/// compares with g(qf). The scaling ratio is deviation(tau) / deviation(tau/2),
/// which is 2 for a linear approach. The normalization \int K d^Dq0 is
/// reported as a diagnostic.
inline ResidualReport delta_limit_check(const ModelParams& p, const VecD& qf, const TestFunction& g, double tau) {
  p.validate();
  if (!(tau > 0.0)) throw DomainError("delta_limit_check: tau must be positive");
  if (qf.size() != static_cast<std::size_t>(p.dim)) throw DimensionMismatch(p.dim, qf.size());
  if (g.center.size() != qf.size()) throw DimensionMismatch(qf.size(), g.center.size());
  if (!(g.width > 0.0)) throw DomainError("delta_limit_check: width must be positive");

  const double target = g(qf);
  const double dev = std::abs(detail::smeared_kernel(p, qf, tau, g) - target);
  const double dev_half = std::abs(detail::smeared_kernel(p, qf, 0.5 * tau, g) - target);
  const Complex norm = detail::smeared_kernel(p, qf, tau, std::nullopt);

  ResidualReport r;
  r.residual_norm = dev;
  r.reference_norm = target;
  r.alpha_used = p.alpha;
  if (dev_half > 0.0) r.scaling_ratio = dev / dev_half;
  r.diagnostics = {{"tau", tau},
                   {"deviation_half_tau", dev_half},
                   {"normalization_re", norm.real()},
                   {"normalization_im", norm.imag()}};
  return r;
}

// ---- equation of motion -----------------------------------------------------

/// Maximum |eom_residual| over `samples` equally spaced times in [0, T].
inline double eom_max_residual(const ModelParams& p, const Endpoints& e, int samples = 65) {
  const auto path = sho_trajectory_2d(p, e);
  double worst = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double t = path.T * k / (samples - 1);
    const VecD r = eom_residual(path, t);
    worst = std::max(worst, std::sqrt(norm2(r)));
  }
  return worst;
}

/// EOM residual at alpha with its ratio to the residual at alpha / 2.
inline ResidualReport eom_scaling(const ModelParams& p, const Endpoints& e, int samples = 65) {
  ModelParams half = p;
  half.alpha = 0.5 * p.alpha;
  ResidualReport r;
  r.residual_norm = eom_max_residual(p, e, samples);
  r.reference_norm = 1.0;
  r.alpha_used = p.alpha;
  const double h = eom_max_residual(half, e, samples);
  if (h > 0.0) r.scaling_ratio = r.residual_norm / h;
  return r;
}

}  // namespace gupqm

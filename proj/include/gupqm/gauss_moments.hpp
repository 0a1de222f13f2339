#pragma once

// Exact integrals of polynomial x Gaussian over R^D:
//
//   I[P] = \int d^D q  P(q) exp(-a |q|^2 + 2 b.q),   Re(a) >= 0, a != 0.
//
// |b|^2 always means sum_i b_i^2 (no conjugation): the closed forms are the
// analytic continuation of the real-vector results, which is what makes them
// usable with the purely imaginary weights of real-time kernels.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "gupqm/core.hpp"
#include "gupqm/multipoly.hpp"
#include "gupqm/quadrature.hpp"

namespace gupqm {

class GaussianWeight {
 public:
  GaussianWeight(Complex a, CVec b) : a_(a), b_(std::move(b)) {
    if (b_.empty()) throw DomainError("GaussianWeight: dimension must be >= 1");
    if (a_ == Complex{}) throw DomainError("GaussianWeight: a = 0");
    if (!std::isfinite(a_.real()) || !std::isfinite(a_.imag())) throw DomainError("GaussianWeight: non-finite a");
    // Real parts that are zero up to rounding count as the oscillatory case.
    if (a_.real() < -1e-13 * std::abs(a_)) throw DomainError("GaussianWeight: Re(a) < 0 (divergent)");
    if (a_.real() < 0.0) a_.real(0.0);
  }

  /// Centered weight exp(-a |q|^2) in `dim` dimensions.
  static GaussianWeight centered(Complex a, int dim) { return {a, CVec(static_cast<std::size_t>(dim))}; }

  Complex a() const noexcept { return a_; }
  const CVec& b() const noexcept { return b_; }
  int dim() const noexcept { return static_cast<int>(b_.size()); }
  bool oscillatory() const noexcept { return a_.real() == 0.0; }

  /// sum_i b_i^2.
  Complex b_squared() const {
    Complex s{};
    for (auto bi : b_) s += bi * bi;
    return s;
  }

  /// (pi/a)^{D/2} exp(|b|^2 / a): the integral of the bare weight.
  Complex normalization() const {
    return principal_pow(kPi / a_, 0.5 * dim()) * std::exp(b_squared() / a_);
  }

  /// Stationary point b/a of the exponent.
  CVec center() const {
    CVec c(b_.size());
    for (std::size_t i = 0; i < b_.size(); ++i) c[i] = b_[i] / a_;
    return c;
  }

 private:
  Complex a_;
  CVec b_;
};

/// A Gaussian exponent -a|q|^2 + 2 b.q + c read off a quadratic polynomial.
struct GaussianExponent {
  GaussianWeight weight;
  Complex constant;
};

/// Splits an isotropic quadratic polynomial into weight and constant. The
/// polynomial must have no cross terms and equal q_i^2 coefficients.
inline GaussianExponent extract_gaussian(const MultiPoly& e, double rel_tol = 1e-12) {
  const int d = e.nvars();
  if (e.degree() > 2) throw DomainError("extract_gaussian: exponent is not quadratic");
  CVec b(static_cast<std::size_t>(d));
  Complex quad{};
  for (int i = 0; i < d; ++i) {
    Monomial lin{}, sq{};
    lin[static_cast<std::size_t>(i)] = 1;
    sq[static_cast<std::size_t>(i)] = 2;
    b[static_cast<std::size_t>(i)] = 0.5 * e.coefficient(lin);
    const Complex ci = e.coefficient(sq);
    if (i == 0)
      quad = ci;
    else if (std::abs(ci - quad) > rel_tol * std::abs(quad))
      throw DomainError("extract_gaussian: anisotropic quadratic form");
  }
  for (const auto& [m, c] : e.terms()) {
    int nonzero = 0;
    for (int i = 0; i < d; ++i) nonzero += m[static_cast<std::size_t>(i)] != 0;
    if (nonzero > 1 && std::abs(c) > rel_tol * std::abs(quad))
      throw DomainError("extract_gaussian: cross term in quadratic form");
  }
  return {GaussianWeight(-quad, std::move(b)), e.coefficient(Monomial{})};
}

enum class MomentKind { basic, q2, xq, xq2, q2xq, q4 };

inline bool moment_uses_x(MomentKind k) {
  return k == MomentKind::xq || k == MomentKind::xq2 || k == MomentKind::q2xq;
}

inline std::string to_string(MomentKind k) {
  switch (k) {
    case MomentKind::basic: return "basic";
    case MomentKind::q2: return "q2";
    case MomentKind::xq: return "xq";
    case MomentKind::xq2: return "xq2";
    case MomentKind::q2xq: return "q2xq";
    case MomentKind::q4: return "q4";
  }
  return "?";
}

/// The polynomial whose Gaussian integral `closed_moment(kind, ...)` gives.
inline MultiPoly moment_polynomial(MomentKind kind, int dim, std::span<const Complex> x = {}) {
  if (moment_uses_x(kind) && static_cast<int>(x.size()) != dim) throw DimensionMismatch(dim, x.size());
  const MultiPoly q2 = MultiPoly::norm2(dim);
  switch (kind) {
    case MomentKind::basic: return MultiPoly::constant(dim, 1.0);
    case MomentKind::q2: return q2;
    case MomentKind::xq: return MultiPoly::linear(x);
    case MomentKind::xq2: {
      const MultiPoly l = MultiPoly::linear(x);
      return l * l;
    }
    case MomentKind::q2xq: return q2 * MultiPoly::linear(x);
    case MomentKind::q4: return q2 * q2;
  }
  throw DomainError("unknown moment kind");
}

/// Closed-form Gaussian moments for the six standard integrands.
inline Complex closed_moment(MomentKind kind, const GaussianWeight& w, std::span<const Complex> x = {}) {
  const bool wants_x = moment_uses_x(kind);
  if (wants_x && x.empty()) throw DomainError("closed_moment: kind " + to_string(kind) + " requires x");
  if (!wants_x && !x.empty()) throw DomainError("closed_moment: kind " + to_string(kind) + " takes no x");
  if (wants_x && static_cast<int>(x.size()) != w.dim()) throw DimensionMismatch(w.dim(), x.size());

  const double d = w.dim();
  const Complex a = w.a();
  const Complex b2 = w.b_squared();
  Complex xb{}, x2{};
  for (std::size_t i = 0; i < x.size(); ++i) {
    xb += x[i] * w.b()[i];
    x2 += x[i] * x[i];
  }
  const Complex base = w.normalization();
  switch (kind) {
    case MomentKind::basic: return base;
    case MomentKind::q2: return base / a * (d / 2.0 + b2 / a);
    case MomentKind::xq: return base * xb / a;
    case MomentKind::xq2: return base * (x2 / (2.0 * a) + xb * xb / (a * a));
    case MomentKind::q2xq: return base * ((d + 2.0) / 2.0 + b2 / a) * xb / (a * a);
    case MomentKind::q4:
      return base / (a * a) * (d * (d + 2.0) / 4.0 + (d + 2.0) * b2 / a + b2 * b2 / (a * a));
  }
  throw DomainError("unknown moment kind");
}

namespace detail {

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
 public:
  void add(Complex z) {
    add_part(re_, cre_, z.real());
    add_part(im_, cim_, z.imag());
  }
  Complex value() const { return {re_ + cre_, im_ + cim_}; }

 private:
  static void add_part(double& sum, double& comp, double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double re_ = 0, cre_ = 0, im_ = 0, cim_ = 0;
};

/// E[u^k] under the normalized weight exp(-a u^2): (k-1)!! / (2a)^{k/2}, 0 for odd k.
inline Complex central_moment_1d(int k, Complex a) {
  if (k % 2 == 1) return 0.0;
  double dfact = 1.0;
  for (int j = k - 1; j > 1; j -= 2) dfact *= j;
  return dfact * std::pow(1.0 / (2.0 * a), k / 2);
}

}  // namespace detail

/// Exact \int P(q) exp(-a|q|^2 + 2b.q) d^Dq: recentre at q = b/a + u, then
/// sum Wick pairings of the centred monomials (a product of 1D double
/// factorial moments, since the weight is isotropic).
inline Complex integrate_poly_gaussian(const MultiPoly& p, const GaussianWeight& w) {
  if (p.nvars() != w.dim()) throw DimensionMismatch(w.dim(), p.nvars());
  if (p.degree() > kMaxPolyDegree) throw DegreeOverflow(p.degree());
  const CVec mu = w.center();
  const MultiPoly centred = p.shifted(mu);
  detail::CompensatedSum acc;
  for (const auto& [m, c] : centred.terms()) {
    Complex t = c;
    for (int i = 0; i < w.dim() && t != Complex{}; ++i)
      t *= detail::central_moment_1d(m[static_cast<std::size_t>(i)], w.a());
    acc.add(t);
  }
  return w.normalization() * acc.value();
}

/// Tensor-product Gauss-Hermite estimate of \int P(q) exp(-a|q|^2 + 2b.q),
/// recentred at the stationary point of the real part of the exponent and
/// scaled by |a|. `poly(q)` is any callable returning the polynomial value
/// at a real point (a std::span<const double>).
template <class Poly>
Complex quadrature_oracle_fn(const Poly& poly, const GaussianWeight& w, int nodes) {
  const int d = w.dim();
  if (w.a().real() <= 0.0) throw DomainError("quadrature_oracle: requires Re(a) > 0");
  if (d > 3) throw DomainError("quadrature_oracle: dimension > 3 not supported");
  if (nodes < 4) throw DomainError("quadrature_oracle: nodes must be >= 4");

  const auto rule = gauss_hermite(nodes);
  const double ra = w.a().real();
  // Nodes spread by |a| rather than Re(a): with a large Im(a) the scaled
  // integrand then oscillates far less and the rule converges much sooner.
  const double scale = 1.0 / std::sqrt(std::abs(w.a()));
  const auto n = static_cast<std::size_t>(nodes);

  // The weight factorizes over axes: precompute per-axis points and factors.
  std::vector<std::vector<double>> pts(static_cast<std::size_t>(d), std::vector<double>(n));
  std::vector<CVec> fac(static_cast<std::size_t>(d), CVec(n));
  for (int i = 0; i < d; ++i) {
    const Complex bi = w.b()[static_cast<std::size_t>(i)];
    const double centre = bi.real() / ra;
    for (std::size_t j = 0; j < n; ++j) {
      const double q = centre + scale * rule.nodes[j];
      pts[static_cast<std::size_t>(i)][j] = q;
      fac[static_cast<std::size_t>(i)][j] =
          scale * rule.weights[j] * std::exp(-w.a() * q * q + 2.0 * bi * q + rule.nodes[j] * rule.nodes[j]);
    }
  }

  detail::CompensatedSum acc;
  std::array<double, 3> q{};
  std::array<std::size_t, 3> idx{};
  const std::size_t total = [&] {
    std::size_t t = 1;
    for (int i = 0; i < d; ++i) t *= n;
    return t;
  }();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t r = flat;
    Complex wt = 1.0;
    for (int i = 0; i < d; ++i) {
      idx[static_cast<std::size_t>(i)] = r % n;
      r /= n;
      q[static_cast<std::size_t>(i)] = pts[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      wt *= fac[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    }
    acc.add(wt * poly(std::span<const double>(q.data(), static_cast<std::size_t>(d))));
  }
  return acc.value();
}

inline Complex quadrature_oracle(const MultiPoly& p, const GaussianWeight& w, int nodes) {
  if (p.nvars() != w.dim()) throw DimensionMismatch(w.dim(), p.nvars());
  return quadrature_oracle_fn([&p](std::span<const double> q) { return p.evaluate(q); }, w, nodes);
}

}  // namespace gupqm

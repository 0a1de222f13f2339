#pragma once

// The deformed uncertainty relation, its minimal length, the first-order
// momentum map P = p (1 + alpha p^2) and a symbol-level commutator check.

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "gupqm/core.hpp"

namespace gupqm {

struct UncertaintyState {
  std::vector<double> dP;     ///< momentum spreads, one per axis
  std::vector<double> meanP;  ///< momentum means, one per axis
  double alpha = 0.0;
  double hbar = 1.0;

  int dim() const { return static_cast<int>(dP.size()); }

  void validate() const {
    if (dP.empty()) throw DomainError("UncertaintyState: empty");
    if (meanP.size() != dP.size()) throw DimensionMismatch(dP.size(), meanP.size());
    for (double x : dP)
      if (!(x >= 0.0)) throw DomainError("UncertaintyState: spreads must be >= 0");
    if (hbar <= 0.0) throw DomainError("UncertaintyState: hbar must be positive");
  }
};

/// Right-hand side of the deformed relation for axis i (zero-based):
/// (hbar/2) [1 + alpha (dP^2 + <P>^2) + 2 alpha (dP_i^2 + <P_i>^2)].
inline double uncertainty_bound(const UncertaintyState& s, int axis) {
  s.validate();
  if (axis < 0 || axis >= s.dim()) throw DomainError("uncertainty_bound: axis out of range");
  double total = 0.0;
  for (int j = 0; j < s.dim(); ++j) {
    const auto k = static_cast<std::size_t>(j);
    total += s.dP[k] * s.dP[k] + s.meanP[k] * s.meanP[k];
  }
  const auto i = static_cast<std::size_t>(axis);
  const double own = s.dP[i] * s.dP[i] + s.meanP[i] * s.meanP[i];
  return 0.5 * s.hbar * (1.0 + s.alpha * total + 2.0 * s.alpha * own);
}

struct MinimalLength {
  double dq_min;
  std::optional<double> dp_star;  ///< minimizing spread, absent when alpha = 0
};

/// One-dimensional minimal position uncertainty sqrt(3 alpha) hbar.
inline MinimalLength minimal_length(double alpha, double hbar) {
  if (alpha < 0.0) throw DomainError("minimal_length: alpha must be >= 0");
  if (hbar <= 0.0) throw DomainError("minimal_length: hbar must be positive");
  if (alpha == 0.0) return {0.0, std::nullopt};
  return {std::sqrt(3.0 * alpha * hbar * hbar), 1.0 / std::sqrt(3.0 * alpha)};
}

/// Lower edge of the allowed region, dQ(dP) = (hbar / 2 dP)(1 + 3 alpha dP^2).
inline std::vector<std::pair<double, double>> bound_curve(double alpha, double hbar,
                                                          const std::vector<double>& dp_grid) {
  if (hbar <= 0.0) throw DomainError("bound_curve: hbar must be positive");
  std::vector<std::pair<double, double>> out;
  out.reserve(dp_grid.size());
  for (double dp : dp_grid) {
    if (!(dp > 0.0)) throw DomainError("bound_curve: grid entries must be positive");
    out.emplace_back(dp, hbar / (2.0 * dp) * (1.0 + 3.0 * alpha * dp * dp));
  }
  return out;
}

inline VecD momentum_map(const VecD& p, double alpha) {
  const double f = 1.0 + alpha * norm2(p);
  return f * p;
}

/// Square matrix stored row-major.
struct ComplexMatrix {
  int n = 0;
  CVec data;

  ComplexMatrix() = default;
  explicit ComplexMatrix(int size) : n(size), data(static_cast<std::size_t>(size) * size) {}
  Complex& operator()(int i, int j) { return data[static_cast<std::size_t>(i * n + j)]; }
  Complex operator()(int i, int j) const { return data[static_cast<std::size_t>(i * n + j)]; }

  double frobenius() const {
    double s = 0.0;
    for (auto z : data) s += std::norm(z);
    return std::sqrt(s);
  }
};

struct CommutatorCheck {
  ComplexMatrix commutator;  ///< i hbar dP_j/dp_i by finite differences
  ComplexMatrix expected;    ///< i hbar (delta_ij (1 + alpha P^2) + 2 alpha P_i P_j)
  ComplexMatrix defect;      ///< commutator - expected
};

/// Evaluates [Q_i, P_j] = i hbar dP_j/dp_i from central differences of
/// momentum_map (one Richardson level) and compares with the deformed bracket.
inline CommutatorCheck commutator_check(const VecD& p, double alpha, double hbar, double step = 1e-4) {
  if (!(step > 0.0)) throw DomainError("commutator_check: step must be positive");
  const int d = static_cast<int>(p.size());
  if (d < 1) throw DomainError("commutator_check: empty momentum");
  CommutatorCheck out{ComplexMatrix(d), ComplexMatrix(d), ComplexMatrix(d)};
  const VecD big_p = momentum_map(p, alpha);
  const double big_p2 = norm2(big_p);

  // Differentiate only the deformation P_j - p_j; [q_i, p_j] = i hbar delta_ij is exact.
  auto deformation = [&](const VecD& x, int j) {
    return momentum_map(x, alpha)[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)];
  };
  auto central = [&](int i, int j, double h) {
    VecD up = p, dn = p;
    up[static_cast<std::size_t>(i)] += h;
    dn[static_cast<std::size_t>(i)] -= h;
    return (deformation(up, j) - deformation(dn, j)) / (2.0 * h);
  };

  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double coarse = central(i, j, step);
      const double fine = central(i, j, 0.5 * step);
      const double delta = i == j ? 1.0 : 0.0;
      out.commutator(i, j) = kI * hbar * (delta + (4.0 * fine - coarse) / 3.0);
      out.expected(i, j) = kI * hbar *
                           (delta + alpha * delta * big_p2 +
                            2.0 * alpha * big_p[static_cast<std::size_t>(i)] * big_p[static_cast<std::size_t>(j)]);
      out.defect(i, j) = out.commutator(i, j) - out.expected(i, j);
    }
  return out;
}

}  // namespace gupqm

#pragma once

// Gauss-Hermite rules and a globally adaptive Gauss-Kronrod (7/15) integrator.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gupqm/core.hpp"

namespace gupqm {

struct GaussHermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;         ///< for the weight exp(-x^2)
  std::vector<double> scaled_weights;  ///< weights[i] * exp(nodes[i]^2)
};

/// n-point Gauss-Hermite rule (physicists' weight) by Newton iteration on the
/// orthonormal Hermite recurrence.
inline GaussHermiteRule gauss_hermite(int n) {
  if (n < 1) throw DomainError("gauss_hermite: n must be >= 1");
  constexpr double kPiM4 = 0.7511255444649425;  // pi^(-1/4)
  constexpr int kMaxIter = 100;

  GaussHermiteRule r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  r.scaled_weights.assign(n, 0.0);
  const int half = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < half; ++i) {
    if (i == 0)
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    else if (i == 1)
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    else if (i == 2)
      z = 1.86 * z - 0.86 * r.nodes[0];
    else if (i == 3)
      z = 1.91 * z - 0.91 * r.nodes[1];
    else
      z = 2.0 * z - r.nodes[i - 2];

    double pp = 0.0;
    bool converged = false;
    for (int it = 0; it < kMaxIter; ++it) {
      double p1 = kPiM4, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1)) * p2 - std::sqrt(static_cast<double>(j) / (j + 1)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) <= 1e-15 * std::max(1.0, std::abs(z))) {
        converged = true;
        break;
      }
    }
    if (!converged) throw ConvergenceError("gauss_hermite: Newton iteration did not converge");
    const double w = 2.0 / (pp * pp);
    r.nodes[i] = z;
    r.nodes[n - 1 - i] = -z;
    r.weights[i] = r.weights[n - 1 - i] = w;
    r.scaled_weights[i] = r.scaled_weights[n - 1 - i] = w * std::exp(z * z);
  }
  if (n % 2 == 1) r.nodes[half - 1] = 0.0;
  return r;
}

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

struct KronrodSegment {
  double a, b, value, error;
  bool operator<(const KronrodSegment& o) const { return error < o.error; }
};

template <class F>
KronrodSegment gk15(F& f, double a, double b) {
  static constexpr std::array<double, 8> xgk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wgk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * wgk[7];
  double gauss = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double s = f(c - dx) + f(c + dx);
    kron += wgk[j] * s;
    if (j % 2 == 1) gauss += wg[j / 2] * s;
  }
  return {a, b, kron * h, std::abs((kron - gauss) * h)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod on a finite interval. Throws
/// ConvergenceError when the tolerance is not met within `max_intervals`.
template <class F>
QuadResult integrate_adaptive(F f, double a, double b, double abs_tol, double rel_tol,
                              int max_intervals = 2000) {
  std::vector<detail::KronrodSegment> heap{detail::gk15(f, a, b)};
  double total = heap.front().value, err = heap.front().error;
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals)
      throw ConvergenceError("integrate_adaptive: tolerance not reached");
    std::pop_heap(heap.begin(), heap.end());
    const auto worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(detail::gk15(f, worst.a, mid));
    std::push_heap(heap.begin(), heap.end());
    heap.push_back(detail::gk15(f, mid, worst.b));
    std::push_heap(heap.begin(), heap.end());
    // Re-sum rather than update incrementally to avoid drift.
    total = 0.0;
    err = 0.0;
    for (const auto& s : heap) {
      total += s.value;
      err += s.error;
    }
  }
  const int count = static_cast<int>(heap.size());
  return {total, err, count};
}

}  // namespace gupqm

#pragma once

// Plane-wave dispersion, the first-order isotropic-oscillator spectrum and an
// independent dense diagonalization of H = p^2/2m + (alpha/m) p^4 + m w^2 q^2/2
// in the truncated number basis.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gupqm/core.hpp"

namespace gupqm {

/// E(k) = hbar^2 |k|^2 / 2m + alpha hbar^4 |k|^4 / m.
inline double plane_wave_energy(const VecD& k, const ModelParams& p) {
  const double k2 = norm2(k);
  const double h2 = p.hbar * p.hbar;
  return h2 * k2 / (2.0 * p.m) + p.alpha * h2 * h2 * k2 * k2 / p.m;
}

struct EnergyLevel {
  int n1 = 0;
  int n2 = -1;  ///< -1 for one-dimensional levels
  double value = 0.0;
};

/// First-order shift of level (n1, n2) in units of alpha m hbar^2 w^2.
inline double sho_shift_2d(int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw DomainError("sho_energy_2d: quantum numbers must be >= 0");
  const double n = n1 + n2;
  return 0.5 * (3.0 * n * n + 5.0 * n - 2.0 * n1 * n2 + 4.0);
}

/// hbar w (n1 + n2 + 1) + (alpha m hbar^2 w^2 / 2)[3(n1+n2)^2 + 5(n1+n2) - 2 n1 n2 + 4].
inline EnergyLevel sho_energy_2d(int n1, int n2, const ModelParams& p) {
  const double shift = sho_shift_2d(n1, n2);
  return {n1, n2, p.hbar * p.omega * (n1 + n2 + 1.0) + p.alpha * p.m * p.hbar * p.hbar * p.omega * p.omega * shift};
}

/// One-dimensional analogue: hbar w (n + 1/2) + (3/4) alpha m hbar^2 w^2 (2n^2 + 2n + 1).
inline EnergyLevel sho_energy_1d(int n, const ModelParams& p) {
  if (n < 0) throw DomainError("sho_energy_1d: quantum number must be >= 0");
  const double shift = 0.75 * (2.0 * n * n + 2.0 * n + 1.0);
  return {n, -1, p.hbar * p.omega * (n + 0.5) + p.alpha * p.m * p.hbar * p.hbar * p.omega * p.omega * shift};
}

/// The lowest `count` first-order levels, ascending; ties keep (n1, n2) order.
inline std::vector<EnergyLevel> sho_formula_levels(const ModelParams& p, int count) {
  std::vector<EnergyLevel> out;
  if (p.dim == 1) {
    for (int n = 0; n < count; ++n) out.push_back(sho_energy_1d(n, p));
  } else if (p.dim == 2) {
    // Shell N holds N + 1 states; include enough shells, then sort.
    for (int shell = 0; static_cast<int>(out.size()) < count + shell + 4; ++shell)
      for (int n1 = shell; n1 >= 0; --n1) out.push_back(sho_energy_2d(n1, shell - n1, p));
    std::stable_sort(out.begin(), out.end(),
                     [](const EnergyLevel& a, const EnergyLevel& b) { return a.value < b.value; });
    out.resize(static_cast<std::size_t>(count));
  } else {
    throw DomainError("sho_formula_levels: dim must be 1 or 2");
  }
  return out;
}

namespace detail {

/// p^2 in the number basis of size n (exact entries; pentadiagonal), units of m hbar w / 2.
inline Eigen::MatrixXd p2_matrix(int n) {
  Eigen::MatrixXd p2 = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    p2(k, k) = 2.0 * k + 1.0;
    if (k + 2 < n) p2(k, k + 2) = p2(k + 2, k) = -std::sqrt((k + 1.0) * (k + 2.0));
  }
  return p2;
}

/// Exact truncation of p^4 = (p^2)^2 to the first n states.
inline Eigen::MatrixXd p4_matrix(int n) {
  const Eigen::MatrixXd big = p2_matrix(n + 2);
  const Eigen::MatrixXd p4 = big * big;
  return p4.topLeftCorner(n, n);
}

inline std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("oscillator oracle: eigensolver failed");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

/// Ascending spectrum for a basis of `n` states per axis. The quartic term
/// changes each n_i by an even amount, so the Hamiltonian splits into parity
/// blocks which are diagonalized separately.
inline std::vector<double> oscillator_spectrum(const ModelParams& p, int n) {
  const double unit = p.m * p.hbar * p.omega / 2.0;     // p^2 scale
  const double quartic = p.alpha / p.m * unit * unit;  // (alpha/m) p^4 scale
  const Eigen::MatrixXd p2 = p2_matrix(n);
  const Eigen::MatrixXd p4 = p4_matrix(n);
  std::vector<double> all;

  if (p.dim == 1) {
    for (int parity = 0; parity < 2; ++parity) {
      std::vector<int> idx;
      for (int k = parity; k < n; k += 2) idx.push_back(k);
      const int sz = static_cast<int>(idx.size());
      Eigen::MatrixXd h(sz, sz);
      for (int a = 0; a < sz; ++a)
        for (int b = 0; b < sz; ++b)
          h(a, b) = quartic * p4(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]) +
                    (a == b ? p.hbar * p.omega * (idx[static_cast<std::size_t>(a)] + 0.5) : 0.0);
      auto ev = symmetric_eigenvalues(h);
      all.insert(all.end(), ev.begin(), ev.end());
    }
  } else if (p.dim == 2) {
    // (p1^2 + p2^2)^2 = p1^4 + p2^4 + 2 p1^2 p2^2
    for (int par1 = 0; par1 < 2; ++par1)
      for (int par2 = 0; par2 < 2; ++par2) {
        std::vector<std::pair<int, int>> idx;
        for (int a = par1; a < n; a += 2)
          for (int b = par2; b < n; b += 2) idx.emplace_back(a, b);
        const int sz = static_cast<int>(idx.size());
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(sz, sz);
        for (int r = 0; r < sz; ++r) {
          const auto [i1, i2] = idx[static_cast<std::size_t>(r)];
          for (int c = 0; c < sz; ++c) {
            const auto [j1, j2] = idx[static_cast<std::size_t>(c)];
            double v = 0.0;
            if (i2 == j2) v += p4(i1, j1);
            if (i1 == j1) v += p4(i2, j2);
            v += 2.0 * p2(i1, j1) * p2(i2, j2);
            h(r, c) = quartic * v;
          }
          h(r, r) += p.hbar * p.omega * (i1 + i2 + 1.0);
        }
        auto ev = symmetric_eigenvalues(h);
        all.insert(all.end(), ev.begin(), ev.end());
      }
  } else {
    throw DomainError("oscillator oracle: dim must be 1 or 2");
  }
  std::sort(all.begin(), all.end());
  return all;
}

}  // namespace detail

struct OracleSpectrum {
  std::vector<double> levels;    ///< lowest requested eigenvalues, ascending
  double convergence_delta = 0;  ///< max change when the basis is doubled
};

/// Lowest `levels` eigenvalues of the deformed oscillator. Refuses to answer
/// unless doubling the per-axis basis moves every requested level by less
/// than `guard`.
inline OracleSpectrum oscillator_matrix_oracle(const ModelParams& p, int basis_per_axis, int levels,
                                               double guard = 1e-10) {
  p.validate();
  if (p.omega <= 0.0) throw DomainError("oscillator oracle: omega must be positive");
  if (basis_per_axis < 16) throw DomainError("oscillator oracle: basis_per_axis must be >= 16");
  if (levels < 1) throw DomainError("oscillator oracle: levels must be >= 1");
  const auto coarse = detail::oscillator_spectrum(p, basis_per_axis);
  if (static_cast<int>(coarse.size()) < levels) throw DomainError("oscillator oracle: basis smaller than levels");
  const auto fine = detail::oscillator_spectrum(p, 2 * basis_per_axis);

  OracleSpectrum out;
  out.levels.assign(coarse.begin(), coarse.begin() + levels);
  for (int k = 0; k < levels; ++k)
    out.convergence_delta =
        std::max(out.convergence_delta, std::abs(coarse[static_cast<std::size_t>(k)] - fine[static_cast<std::size_t>(k)]));
  if (out.convergence_delta >= guard)
    throw ConvergenceError("oscillator oracle: basis too small (doubling moves levels by " +
                           std::to_string(out.convergence_delta) + ")");
  return out;
}

}  // namespace gupqm

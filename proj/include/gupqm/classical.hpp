#pragma once

// First-order-in-alpha classical mechanics of the deformed free particle and
// isotropic oscillator: the D = 2 oscillator trajectory with its equation of
// motion residual, and the classical actions S0 + alpha S1 for any D.

#include <array>
#include <cmath>

#include "gupqm/core.hpp"

namespace gupqm {

/// The rotation invariants |q0|^2, |qf|^2, q0.qf that every action and
/// prefactor depends on. R is Complex for numeric endpoints or MultiPoly when
/// one endpoint is symbolic.
template <class R>
struct PairInvariants {
  R n0;
  R nf;
  R dot;

  /// |qf - q0|^2
  R separation2() const { return n0 + nf - 2.0 * dot; }
};

inline PairInvariants<Complex> pair_invariants(const VecD& q0, const VecD& qf) {
  return {norm2(q0), norm2(qf), dot(q0, qf)};
}

// ---- actions as expressions ------------------------------------------------

/// Oscillator action S0 at complex time T.
template <class R>
R sho_s0_expr(double m, double omega, Complex t, const PairInvariants<R>& v) {
  const Complex wt = omega * t;
  const Complex s = checked_sin(wt);
  const Complex c = std::cos(wt);
  return (m * omega / (2.0 * s)) * ((v.n0 + v.nf) * c - 2.0 * v.dot);
}

/// Oscillator first-order action S1 at complex time T.
template <class R>
R sho_s1_expr(double m, double omega, Complex t, const PairInvariants<R>& v) {
  const Complex wt = omega * t;
  const Complex s = checked_sin(wt);
  const Complex quartic = 12.0 * wt + 8.0 * std::sin(2.0 * wt) + std::sin(4.0 * wt);
  const Complex mixed = 12.0 * wt * std::cos(wt) + 11.0 * s + 3.0 * std::sin(3.0 * wt);
  const Complex cross = 4.0 * wt + 2.0 * wt * std::cos(2.0 * wt) + 5.0 * std::sin(2.0 * wt);
  const Complex lead = -(m * m * m * omega * omega * omega) / (32.0 * s * s * s * s);
  return lead * (quartic * (v.n0 * v.n0 + v.nf * v.nf) - (4.0 * mixed) * (v.dot * (v.n0 + v.nf)) +
                 (4.0 * cross) * (2.0 * (v.dot * v.dot) + v.n0 * v.nf));
}

template <class R>
R free_s0_expr(double m, Complex t, const PairInvariants<R>& v) {
  return (m / (2.0 * t)) * v.separation2();
}

/// -m^3 |dq|^4 / T^3, the alpha coefficient of the free classical action.
template <class R>
R free_s1_expr(double m, Complex t, const PairInvariants<R>& v) {
  const R d2 = v.separation2();
  return (-(m * m * m) / (t * t * t)) * (d2 * d2);
}

// ---- real-time classical actions -------------------------------------------

struct ActionPair {
  double S0 = 0.0;
  double S1 = 0.0;

  double total(double alpha) const { return S0 + alpha * S1; }
};

inline void require_real_time(const Endpoints& e, const char* op) {
  if (e.time.is_euclidean()) throw DomainError(std::string(op) + ": real time required");
}

/// Classical action of the O(alpha) oscillator; valid in any dimension.
inline ActionPair sho_action(const ModelParams& p, const Endpoints& e) {
  p.validate();
  e.validate(p.dim);
  require_real_time(e, "sho_action");
  if (p.omega <= 0.0) throw DomainError("sho_action: omega must be positive (use free_action)");
  const auto v = pair_invariants(e.q0, e.qf);
  const Complex t = e.time.value();
  return {sho_s0_expr(p.m, p.omega, t, v).real(), sho_s1_expr(p.m, p.omega, t, v).real()};
}

/// S_cl = (m/2T)|dq|^2 (1 - 2 alpha m^2 |dq|^2 / T^2) split as S0 + alpha S1.
inline ActionPair free_action(const ModelParams& p, const Endpoints& e) {
  p.validate();
  e.validate(p.dim);
  require_real_time(e, "free_action");
  const auto v = pair_invariants(e.q0, e.qf);
  const Complex t = e.time.value();
  return {free_s0_expr(p.m, t, v).real(), free_s1_expr(p.m, t, v).real()};
}

// ---- D = 2 oscillator trajectory -------------------------------------------

/// Coefficients of the O(alpha) trajectory
///   q_i(t) = A_i cos wt + B_i sin wt + alpha [F_i cos wt + G_i sin wt
///            + (m^2 w^2 / 8)(-4 C3 wt cos wt + 4 C1 wt sin wt - C2 cos 3wt - C4 sin 3wt)]
/// with the cubic blocks C (axis 1) and C~ (axis 2, labels swapped).
struct ClassicalPath {
  std::array<double, 2> A{}, B{}, F{}, G{};
  std::array<std::array<double, 4>, 2> C{};  ///< C[0] = C1..C4, C[1] = C~1..C~4
  ModelParams params;
  double T = 0.0;

  VecD q0() const { return VecD{A[0], A[1]}; }
};

namespace detail {

/// C1..C4 for the axis whose (A, B) are (a1, b1), with partner (a2, b2).
inline std::array<double, 4> cubic_block(double a1, double a2, double b1, double b2) {
  return {
      -3.0 * a1 * (a1 * a1 + a2 * a2 + b1 * b1) - 2.0 * a2 * b1 * b2 - a1 * b2 * b2,
      3.0 * (a1 * a1 * a1 - 2.0 * a2 * b1 * b2 + a1 * (a2 * a2 - 3.0 * b1 * b1 - b2 * b2)),
      -3.0 * a1 * a1 * b1 - 2.0 * a1 * a2 * b2 - a2 * a2 * b1 - 3.0 * b1 * (b1 * b1 + b2 * b2),
      3.0 * (3.0 * a1 * a1 * b1 + 2.0 * a1 * a2 * b2 - b1 * (-a2 * a2 + b1 * b1 + b2 * b2)),
  };
}

struct PathJet {
  std::array<double, 2> q, v, acc;
};

inline PathJet path_jet(const ClassicalPath& path, double t) {
  const auto& p = path.params;
  const double w = p.omega, th = w * t;
  const double k = p.m * p.m * w * w / 8.0;
  const double c = std::cos(th), s = std::sin(th), c3 = std::cos(3.0 * th), s3 = std::sin(3.0 * th);
  PathJet j{};
  for (int i = 0; i < 2; ++i) {
    const auto& C = path.C[static_cast<std::size_t>(i)];
    const double A = path.A[static_cast<std::size_t>(i)], B = path.B[static_cast<std::size_t>(i)];
    const double F = path.F[static_cast<std::size_t>(i)], G = path.G[static_cast<std::size_t>(i)];
    const double corr0 = F * c + G * s + k * (-4.0 * C[2] * th * c + 4.0 * C[0] * th * s - C[1] * c3 - C[3] * s3);
    const double corr1 = -F * s + G * c +
                         k * (-4.0 * C[2] * (c - th * s) + 4.0 * C[0] * (s + th * c) + 3.0 * C[1] * s3 -
                              3.0 * C[3] * c3);
    const double corr2 = -F * c - G * s +
                         k * (4.0 * C[2] * (2.0 * s + th * c) + 4.0 * C[0] * (2.0 * c - th * s) + 9.0 * C[1] * c3 +
                              9.0 * C[3] * s3);
    j.q[static_cast<std::size_t>(i)] = A * c + B * s + p.alpha * corr0;
    j.v[static_cast<std::size_t>(i)] = w * (-A * s + B * c + p.alpha * corr1);
    j.acc[static_cast<std::size_t>(i)] = w * w * (-A * c - B * s + p.alpha * corr2);
  }
  return j;
}

inline void check_time_in_range(const ClassicalPath& path, double t) {
  const double lo = std::min(0.0, path.T), hi = std::max(0.0, path.T);
  if (!(t >= lo && t <= hi)) throw DomainError("classical path: t outside [0, T]");
}

}  // namespace detail

/// Builds the D = 2 oscillator trajectory pinned to e.q0 at t = 0 and e.qf at t = T.
inline ClassicalPath sho_trajectory_2d(const ModelParams& p, const Endpoints& e) {
  p.validate();
  if (p.dim != 2) throw DomainError("sho_trajectory_2d: requires dim = 2");
  e.validate(2);
  require_real_time(e, "sho_trajectory_2d");
  if (p.omega <= 0.0) throw DomainError("sho_trajectory_2d: omega must be positive");
  const double T = e.time.magnitude();
  const double wt = p.omega * T;
  const double s = std::sin(wt), c = std::cos(wt);
  if (std::abs(s) < kCausticThreshold) throw CausticError(Complex(wt, 0.0));

  ClassicalPath path;
  path.params = p;
  path.T = T;
  for (int i = 0; i < 2; ++i) {
    const auto k = static_cast<std::size_t>(i);
    path.A[k] = e.q0[k];
    path.B[k] = (e.qf[k] - e.q0[k] * c) / s;
  }
  path.C[0] = detail::cubic_block(path.A[0], path.A[1], path.B[0], path.B[1]);
  path.C[1] = detail::cubic_block(path.A[1], path.A[0], path.B[1], path.B[0]);
  const double k = p.m * p.m * p.omega * p.omega / 8.0;
  for (int i = 0; i < 2; ++i) {
    const auto& C = path.C[static_cast<std::size_t>(i)];
    path.F[static_cast<std::size_t>(i)] = k * C[1];
    path.G[static_cast<std::size_t>(i)] =
        k / s * ((4.0 * wt * C[2] - C[1]) * c - 4.0 * wt * C[0] * s + C[1] * std::cos(3.0 * wt) +
                 C[3] * std::sin(3.0 * wt));
  }
  return path;
}

inline VecD path_eval(const ClassicalPath& path, double t) {
  detail::check_time_in_range(path, t);
  const auto j = detail::path_jet(path, t);
  return VecD{j.q[0], j.q[1]};
}

inline VecD path_velocity(const ClassicalPath& path, double t) {
  detail::check_time_in_range(path, t);
  const auto j = detail::path_jet(path, t);
  return VecD{j.v[0], j.v[1]};
}

/// Left side of the O(alpha) Euler-Lagrange equations on the path, from
/// analytic derivatives; O(alpha^2) by construction.
inline VecD eom_residual(const ClassicalPath& path, double t) {
  detail::check_time_in_range(path, t);
  const auto j = detail::path_jet(path, t);
  const auto& p = path.params;
  const double w2 = p.omega * p.omega, g = 4.0 * p.alpha * p.m * p.m;
  const double v1 = j.v[0], v2 = j.v[1], a1 = j.acc[0], a2 = j.acc[1];
  return VecD{
      a1 + w2 * j.q[0] - g * ((3.0 * v1 * v1 + v2 * v2) * a1 + 2.0 * v1 * v2 * a2),
      a2 + w2 * j.q[1] - g * ((v1 * v1 + 3.0 * v2 * v2) * a2 + 2.0 * v1 * v2 * a1),
  };
}

/// Lagrangian m|v|^2/2 - alpha m^3 |v|^4 - m w^2 |q|^2 / 2 along the path.
inline double path_lagrangian(const ClassicalPath& path, double t) {
  const auto j = detail::path_jet(path, t);
  const auto& p = path.params;
  const double v2 = j.v[0] * j.v[0] + j.v[1] * j.v[1];
  const double q2 = j.q[0] * j.q[0] + j.q[1] * j.q[1];
  return 0.5 * p.m * v2 - p.alpha * p.m * p.m * p.m * v2 * v2 - 0.5 * p.m * p.omega * p.omega * q2;
}

}  // namespace gupqm

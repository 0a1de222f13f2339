#pragma once

// Foundational value types shared by every module: parameters, vectors,
// time arguments, endpoints and the error hierarchy.

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gupqm {

using Complex = std::complex<double>;
using CVec = std::vector<Complex>;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;

/// |sin(omega T)| below this is treated as a caustic.
inline constexpr double kCausticThreshold = 1e-8;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or arguments outside an operation's domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public DomainError {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : DomainError("dimension mismatch: expected " + std::to_string(expected) +
                    ", got " + std::to_string(got)) {}
};

/// sin(omega T) vanished (or nearly so); the closed forms diverge there.
class CausticError : public DomainError {
 public:
  explicit CausticError(Complex omega_t)
      : DomainError("caustic: |sin(omega T)| < threshold at omega T = " + format(omega_t)),
        omega_t_(omega_t) {}

  Complex omega_t() const noexcept { return omega_t_; }

 private:
  static std::string format(Complex z) {
    std::string s = std::to_string(z.real());
    if (z.imag() != 0.0) s += (z.imag() < 0 ? " - " : " + ") + std::to_string(std::abs(z.imag())) + "i";
    return s;
  }
  Complex omega_t_;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

struct ModelParams {
  double m = 1.0;
  double hbar = 1.0;
  double omega = 0.0;  ///< 0 selects the free particle
  double alpha = 0.0;  ///< GUP parameter, (momentum)^-2
  int dim = 1;

  void validate() const {
    if (!std::isfinite(m) || !std::isfinite(hbar) || !std::isfinite(omega) || !std::isfinite(alpha))
      throw DomainError("model parameters must be finite");
    if (m <= 0.0) throw DomainError("mass must be positive");
    if (hbar <= 0.0) throw DomainError("hbar must be positive");
    if (omega < 0.0) throw DomainError("omega must be non-negative");
    if (dim < 1) throw DomainError("dimension must be >= 1");
  }

  bool operator==(const ModelParams&) const = default;
};

/// Real D-vector (positions, momenta, wave vectors).
class VecD {
 public:
  VecD() = default;
  explicit VecD(std::size_t n, double fill = 0.0) : c_(n, fill) {}
  VecD(std::initializer_list<double> xs) : c_(xs) {}
  explicit VecD(std::vector<double> xs) : c_(std::move(xs)) {}

  std::size_t size() const noexcept { return c_.size(); }
  double operator[](std::size_t i) const { return c_[i]; }
  double& operator[](std::size_t i) { return c_[i]; }
  auto begin() const noexcept { return c_.begin(); }
  auto end() const noexcept { return c_.end(); }
  const std::vector<double>& components() const noexcept { return c_; }

  bool all_finite() const {
    for (double x : c_)
      if (!std::isfinite(x)) return false;
    return true;
  }

  bool operator==(const VecD&) const = default;

  friend VecD operator+(const VecD& a, const VecD& b) {
    check_same(a, b);
    VecD r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
  }
  friend VecD operator-(const VecD& a, const VecD& b) {
    check_same(a, b);
    VecD r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
  }
  friend VecD operator*(double s, const VecD& a) {
    VecD r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
  }

  static void check_same(const VecD& a, const VecD& b) {
    if (a.size() != b.size()) throw DimensionMismatch(a.size(), b.size());
  }

 private:
  std::vector<double> c_;
};

inline double dot(const VecD& a, const VecD& b) {
  VecD::check_same(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const VecD& a) { return dot(a, a); }

enum class TimeKind { real, euclidean };

/// Propagation time. Euclidean time tau is stored as T = -i tau so every
/// formula is evaluated through one complex-time code path.
class TimeArg {
 public:
  static TimeArg real(double t) {
    if (!std::isfinite(t) || t == 0.0) throw DomainError("real time must be finite and nonzero");
    return TimeArg(Complex(t, 0.0), TimeKind::real);
  }
  static TimeArg euclidean(double tau) {
    if (!std::isfinite(tau) || tau <= 0.0) throw DomainError("euclidean time must be positive");
    return TimeArg(Complex(0.0, -tau), TimeKind::euclidean);
  }

  Complex value() const noexcept { return value_; }
  TimeKind kind() const noexcept { return kind_; }
  bool is_euclidean() const noexcept { return kind_ == TimeKind::euclidean; }
  /// T for real time, tau for Euclidean time.
  double magnitude() const noexcept { return kind_ == TimeKind::real ? value_.real() : -value_.imag(); }

  /// Same kind, magnitude scaled.
  TimeArg scaled(double s) const {
    return kind_ == TimeKind::real ? real(magnitude() * s) : euclidean(magnitude() * s);
  }

  friend TimeArg operator+(const TimeArg& a, const TimeArg& b) {
    if (a.kind_ != b.kind_) throw DomainError("cannot add real and euclidean times");
    return a.kind_ == TimeKind::real ? real(a.magnitude() + b.magnitude())
                                     : euclidean(a.magnitude() + b.magnitude());
  }
  friend TimeArg operator-(const TimeArg& a, const TimeArg& b) {
    if (a.kind_ != b.kind_) throw DomainError("cannot subtract real and euclidean times");
    return a.kind_ == TimeKind::real ? real(a.magnitude() - b.magnitude())
                                     : euclidean(a.magnitude() - b.magnitude());
  }

  bool operator==(const TimeArg&) const = default;

 private:
  TimeArg(Complex v, TimeKind k) : value_(v), kind_(k) {}
  Complex value_;
  TimeKind kind_;
};

struct Endpoints {
  VecD q0;
  VecD qf;
  TimeArg time = TimeArg::real(1.0);

  void validate(int dim) const {
    if (q0.size() != static_cast<std::size_t>(dim)) throw DimensionMismatch(dim, q0.size());
    if (qf.size() != static_cast<std::size_t>(dim)) throw DimensionMismatch(dim, qf.size());
    if (!q0.all_finite() || !qf.all_finite()) throw DomainError("endpoints must be finite");
  }

  bool operator==(const Endpoints&) const = default;
};

struct Displacement {
  VecD delta;
  double norm2;
};

inline Displacement displacement(const Endpoints& e) {
  VecD d = e.qf - e.q0;
  double n = norm2(d);
  return {std::move(d), n};
}

/// Principal-branch complex power; the branch convention used everywhere.
/// Integer and half-integer exponents (the D/2 powers) use exact products and
/// the principal square root, which is the same branch.
inline Complex principal_pow(Complex base, double exponent) {
  if (base == Complex(0.0, 0.0)) throw DomainError("zero base in complex power");
  const double twice = 2.0 * exponent;
  if (twice == std::floor(twice) && std::abs(twice) <= 64.0) {
    const int whole = static_cast<int>(std::floor(exponent));
    Complex r = 1.0;
    for (int k = 0; k < std::abs(whole); ++k) r *= base;
    if (whole < 0) r = 1.0 / r;
    if (twice != 2.0 * whole) r *= std::sqrt(base);
    return r;
  }
  return std::exp(exponent * std::log(base));
}

/// sin(omega T) with the caustic guard applied.
inline Complex checked_sin(Complex omega_t) {
  const Complex s = std::sin(omega_t);
  if (std::abs(s) < kCausticThreshold) throw CausticError(omega_t);
  return s;
}

}  // namespace gupqm

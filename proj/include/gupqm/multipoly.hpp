#pragma once

// Sparse complex multivariate polynomials in a fixed number of variables.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <vector>

#include "gupqm/core.hpp"

namespace gupqm {

inline constexpr int kMaxPolyVars = 8;
inline constexpr int kMaxPolyDegree = 8;

class DegreeOverflow : public DomainError {
 public:
  explicit DegreeOverflow(int degree)
      : DomainError("polynomial degree " + std::to_string(degree) + " exceeds bound " +
                    std::to_string(kMaxPolyDegree)) {}
};

/// Exponent multi-index; unused trailing slots stay zero.
using Monomial = std::array<std::uint8_t, kMaxPolyVars>;

inline int total_degree(const Monomial& m) {
  return std::accumulate(m.begin(), m.end(), 0);
}

class MultiPoly {
 public:
  explicit MultiPoly(int nvars) : nvars_(nvars) {
    if (nvars < 1 || nvars > kMaxPolyVars)
      throw DomainError("MultiPoly supports 1.." + std::to_string(kMaxPolyVars) + " variables");
  }

  static MultiPoly constant(int nvars, Complex c) {
    MultiPoly p(nvars);
    p.add_term(Monomial{}, c);
    return p;
  }

  /// The coordinate q_i.
  static MultiPoly variable(int nvars, int i) {
    MultiPoly p(nvars);
    Monomial m{};
    m.at(static_cast<std::size_t>(i)) = 1;
    p.add_term(m, 1.0);
    return p;
  }

  /// |q|^2 = sum_i q_i^2.
  static MultiPoly norm2(int nvars) {
    MultiPoly p(nvars);
    for (int i = 0; i < nvars; ++i) {
      Monomial m{};
      m[static_cast<std::size_t>(i)] = 2;
      p.add_term(m, 1.0);
    }
    return p;
  }

  /// x . q for a fixed complex vector x.
  static MultiPoly linear(std::span<const Complex> x) {
    MultiPoly p(static_cast<int>(x.size()));
    for (std::size_t i = 0; i < x.size(); ++i) {
      Monomial m{};
      m[i] = 1;
      p.add_term(m, x[i]);
    }
    return p;
  }

  int nvars() const noexcept { return nvars_; }
  const std::map<Monomial, Complex>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  int degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
    return d;
  }

  Complex coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Complex{} : it->second;
  }

  void add_term(const Monomial& m, Complex c) {
    const int deg = total_degree(m);
    if (deg > kMaxPolyDegree) throw DegreeOverflow(deg);
    for (int i = nvars_; i < kMaxPolyVars; ++i)
      if (m[static_cast<std::size_t>(i)] != 0) throw DomainError("monomial uses an undeclared variable");
    if (c == Complex{}) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Complex{}) terms_.erase(it);
    }
  }

  template <class Vec>
  Complex evaluate(const Vec& q) const {
    if (static_cast<int>(q.size()) != nvars_) throw DimensionMismatch(nvars_, q.size());
    Complex s{};
    for (const auto& [m, c] : terms_) {
      Complex t = c;
      for (int i = 0; i < nvars_; ++i)
        for (int k = 0; k < m[static_cast<std::size_t>(i)]; ++k) t *= q[static_cast<std::size_t>(i)];
      s += t;
    }
    return s;
  }

  /// p(u + shift) as a polynomial in u.
  MultiPoly shifted(std::span<const Complex> shift) const;

  MultiPoly& operator+=(const MultiPoly& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  MultiPoly& operator-=(const MultiPoly& o) {
    check(o);
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  MultiPoly& operator*=(Complex s) {
    if (s == Complex{}) {
      terms_.clear();
      return *this;
    }
    for (auto& [m, c] : terms_) c *= s;
    return *this;
  }
  MultiPoly& operator+=(Complex s) {
    add_term(Monomial{}, s);
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator-(MultiPoly a) { return a *= -1.0; }
  friend MultiPoly operator*(Complex s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator*(MultiPoly a, Complex s) { return a *= s; }
  friend MultiPoly operator*(double s, MultiPoly a) { return a *= Complex(s); }
  friend MultiPoly operator+(MultiPoly a, Complex s) { return a += s; }
  friend MultiPoly operator+(Complex s, MultiPoly a) { return a += s; }
  friend MultiPoly operator-(MultiPoly a, Complex s) { return a += -s; }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.check(b);
    MultiPoly r(a.nvars_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        Monomial m{};
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = static_cast<std::uint8_t>(ma[i] + mb[i]);
        r.add_term(m, ca * cb);
      }
    return r;
  }

  bool operator==(const MultiPoly&) const = default;

 private:
  void check(const MultiPoly& o) const {
    if (o.nvars_ != nvars_) throw DimensionMismatch(nvars_, o.nvars_);
  }

  int nvars_;
  std::map<Monomial, Complex> terms_;
};

inline MultiPoly MultiPoly::shifted(std::span<const Complex> shift) const {
  if (static_cast<int>(shift.size()) != nvars_) throw DimensionMismatch(nvars_, shift.size());
  MultiPoly out(nvars_);
  for (const auto& [m, c] : terms_) {
    // prod_i (u_i + s_i)^{e_i}, expanded binomially axis by axis.
    MultiPoly acc = constant(nvars_, c);
    for (int i = 0; i < nvars_; ++i) {
      const int e = m[static_cast<std::size_t>(i)];
      if (e == 0) continue;
      MultiPoly factor(nvars_);
      double binom = 1.0;
      Complex spow = 1.0;
      // sum_k C(e,k) u^k s^{e-k}; iterate k from e down to 0.
      std::vector<Complex> s_powers(static_cast<std::size_t>(e) + 1);
      for (int k = 0; k <= e; ++k) {
        s_powers[static_cast<std::size_t>(k)] = spow;
        spow *= shift[static_cast<std::size_t>(i)];
      }
      for (int k = 0; k <= e; ++k) {
        Monomial mk{};
        mk[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(k);
        factor.add_term(mk, binom * s_powers[static_cast<std::size_t>(e - k)]);
        binom = binom * (e - k) / (k + 1);
      }
      acc = acc * factor;
    }
    out += acc;
  }
  return out;
}

}  // namespace gupqm

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "gupqm/gupqm.hpp"

using namespace gupqm;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

char buf[512];

template <class... Args>
std::string fmt(const char* f, Args... args) {
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

VecD random_vec(SplitMix64& r, int dim, double scale = 1.0) {
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (auto& x : v) x = r.uniform(-scale, scale);
  return VecD(v);
}

Outcome moments_vs_quadrature() {
  constexpr MomentKind kinds[] = {MomentKind::basic, MomentKind::q2,   MomentKind::xq,
                                  MomentKind::xq2,   MomentKind::q2xq, MomentKind::q4};
  double worst = 0.0;
  int evaluated = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    auto r = trial_stream(2024, i);
    const int dim = 1 + static_cast<int>(i % 3);
    CVec b(static_cast<std::size_t>(dim)), x(static_cast<std::size_t>(dim));
    for (auto& v : b) v = {r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0)};
    for (auto& v : x) v = {r.uniform(-1.0, 1.0), r.uniform(-1.0, 1.0)};
    const GaussianWeight w({r.uniform(0.5, 2.0), r.uniform(-1.0, 1.0)}, b);
    for (auto kind : kinds) {
      const auto xs = moment_uses_x(kind) ? std::span<const Complex>(x) : std::span<const Complex>();
      const Complex closed = closed_moment(kind, w, xs);
      const Complex quad = quadrature_oracle(moment_polynomial(kind, dim, xs), w, 64);
      worst = std::max(worst, rel(quad, closed));
      ++evaluated;
    }
  }
  return {worst <= 1e-10, fmt("%d moments, max rel %.2e (tol 1e-10)", evaluated, worst)};
}

Outcome spectral_vs_direct() {
  double worst = 0.0;
  for (int dim = 1; dim <= 3; ++dim)
    for (double alpha : {0.0, 1e-4, 1e-2})
      for (std::uint64_t i = 0; i < 20; ++i) {
        auto r = trial_stream(31 + static_cast<std::uint64_t>(dim), i);
        const ModelParams p{r.uniform(0.5, 2.0), r.uniform(0.5, 1.5), 0.0, alpha, dim};
        const double t = r.uniform(0.3, 2.0);
        const Endpoints e{random_vec(r, dim), random_vec(r, dim), i % 2 ? TimeArg::euclidean(t) : TimeArg::real(t)};
        worst = std::max(worst, rel(free_kernel_spectral(p, e).linearized(), free_kernel(p, e).linearized()));
      }
  return {worst <= 1e-12, fmt("D=1..3, alpha in {0,1e-4,1e-2}, max rel %.2e (tol 1e-12)", worst)};
}

Outcome beta_fixing() {
  double canonical = 0.0, perturbed = 1e300;
  for (int dim = 1; dim <= 3; ++dim)
    for (std::uint64_t i = 0; i < 10; ++i) {
      auto r = trial_stream(47 + static_cast<std::uint64_t>(dim), i);
      const double T = r.uniform(0.6, 2.4);
      const bool euclid = i % 2 == 1;
      auto mk = [&](double t) { return euclid ? TimeArg::euclidean(t) : TimeArg::real(t); };
      const CompositionSplit s{{random_vec(r, dim), random_vec(r, dim), mk(T)}, mk(T * r.uniform(0.25, 0.75))};
      const ModelParams sho{1.0, 1.0, 1.0, 1e-3, dim}, free{1.0, 1.0, 0.0, 1e-3, dim};
      canonical = std::max(canonical, composition_check_analytic(sho, s).relative());
      canonical = std::max(canonical, composition_check_analytic(free, s).relative());
      for (int which = 0; which < 3; ++which)
        for (double sign : {-1.0, 1.0}) {
          auto spec = PrefactorSpec::canonical(dim);
          (which == 0 ? spec.beta1 : which == 1 ? spec.beta2 : spec.beta3) += 0.1 * sign;
          perturbed = std::min(perturbed, composition_check_analytic(sho, s, spec).relative());
        }
    }
  return {canonical <= 1e-10 && perturbed >= 1e-5,
          fmt("canonical max %.2e (tol 1e-10), perturbed min %.2e (need >= 1e-5)", canonical, perturbed)};
}

Outcome coefficient_identities() {
  bool ok = free_bracket_coefficients(2).constant == 8 && free_bracket_coefficients(2).separation == 8;
  ok = ok && canonical_betas(1).beta1 == Rational{3, 8} && canonical_betas(1).beta2 == Rational{-3, 8} &&
       canonical_betas(1).beta3 == Rational{1, 1};
  // Numeric form of the D = 2 bracket at dyadic inputs, where every operation is exact.
  const ModelParams p{2.0, 0.5, 0.0, 0.25, 2};
  const VecD q0{0.5, -1.0}, qf{1.5, 0.0};
  const double T = 2.0, d2 = norm2(qf - q0);
  const Complex f = free_kernel(p, {q0, qf, TimeArg::real(T)}).f_alpha;
  const Complex expect = Complex(0.0, 8.0 * p.hbar * p.m / T) - 8.0 * p.m * p.m * d2 / (T * T);
  const bool exact = f == expect;
  return {ok && exact, fmt("D=2 bracket (8, 8) %s, D=1 betas (3/8, -3/8, 1) %s", exact ? "exact" : "inexact",
                           ok ? "exact" : "wrong")};
}

Outcome small_omega() {
  double kernel_gap = 0.0, prefactor_gap = 0.0;
  for (int dim = 1; dim <= 3; ++dim)
    for (std::uint64_t i = 0; i < 10; ++i) {
      auto r = trial_stream(59 + static_cast<std::uint64_t>(dim), i);
      const double T = r.uniform(0.5, 2.0), m = r.uniform(0.5, 2.0), hbar = r.uniform(0.5, 1.5);
      const ModelParams ps{m, hbar, 1e-4 / T, 1e-3, dim}, pf{m, hbar, 0.0, 1e-3, dim};
      const Endpoints e{random_vec(r, dim), random_vec(r, dim), TimeArg::real(T)};
      kernel_gap = std::max(kernel_gap, rel(sho_kernel(ps, e).amplitude, free_kernel(pf, e).amplitude));
      const double d2 = norm2(e.qf - e.q0);
      const Complex limit =
          Complex(0.0, dim * (dim + 2.0) * hbar * m / T) - 2.0 * (dim + 2.0) * m * m * d2 / (T * T);
      prefactor_gap =
          std::max(prefactor_gap, std::abs(sho_prefactor(ps, e, PrefactorSpec::canonical(dim)) - limit) / std::abs(limit));
    }
  return {kernel_gap <= 1e-6 && prefactor_gap <= 1e-4,
          fmt("wT=1e-4: kernel rel %.2e (tol 1e-6), prefactor rel %.2e (tol 1e-4)", kernel_gap, prefactor_gap)};
}

Outcome schrodinger() {
  double worst = 0.0, lo = 1e300, hi = 0.0;
  for (int dim = 1; dim <= 3; ++dim)
    for (double omega : {0.0, 0.5}) {
      const std::vector<double> a{0.3, -0.2, 0.1}, b{0.5, 0.4, -0.3};
      const Endpoints e{VecD(std::vector<double>(a.begin(), a.begin() + dim)),
                        VecD(std::vector<double>(b.begin(), b.begin() + dim)), TimeArg::real(3.0)};
      const auto rep = schrodinger_residual({1.0, 1.0, omega, 1e-3, dim}, e);
      worst = std::max(worst, rep.relative());
      const double ratio = rep.scaling_ratio.value_or(0.0);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
  return {worst <= 1e-4 && lo >= 3.6 && hi <= 4.4,
          fmt("D=1..3 free+sho T=3: max rel %.2e (tol 1e-4), ratio [%.3f, %.3f] in [3.6, 4.4]", worst, lo, hi)};
}

Outcome delta_limit() {
  double dev = 0.0, norm_gap = 0.0, lo = 1e300, hi = 0.0;
  const double tau = 1e-3, alpha = 1e-3;
  for (int dim = 1; dim <= 3; ++dim)
    for (double omega : {0.0, 1.0}) {
      auto r = trial_stream(71, static_cast<std::uint64_t>(dim));
      const VecD qf = random_vec(r, dim, 0.5);
      const auto rep = delta_limit_check({1.0, 1.0, omega, alpha, dim}, qf, {random_vec(r, dim, 0.5), 1.0}, tau);
      dev = std::max(dev, rep.residual_norm);
      const double ratio = rep.scaling_ratio.value_or(0.0);
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
      for (const auto& [k, v] : rep.diagnostics)
        if (k == "normalization_re") norm_gap = std::max(norm_gap, std::abs(v - 1.0));
    }
  const bool ok = dev <= 1e-3 && lo >= 1.7 && hi <= 2.3 && norm_gap <= tau + alpha * alpha;
  return {ok, fmt("tau=1e-3: max dev %.2e (tol 1e-3), tau-halving ratio [%.3f, %.3f], |norm-1| %.2e", dev, lo, hi,
                  norm_gap)};
}

Outcome eom() {
  double lo = 1e300, hi = 0.0;
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto r = trial_stream(83, i);
    const Endpoints e{random_vec(r, 2), random_vec(r, 2), TimeArg::real(r.uniform(0.6, 2.4))};
    const double ratio = eom_scaling({1.0, 1.0, 1.0, 1e-3, 2}, e).scaling_ratio.value_or(0.0);
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  return {lo >= 3.6 && hi <= 4.4, fmt("100 endpoint sets, ratio [%.3f, %.3f] in [3.6, 4.4]", lo, hi)};
}

Outcome spectrum() {
  const ModelParams p{1.0, 1.0, 1.0, 1e-5, 2};
  const auto o = oscillator_matrix_oracle(p, 32, 6);
  const double formula[] = {sho_energy_2d(0, 0, p).value, sho_energy_2d(1, 0, p).value, sho_energy_2d(0, 1, p).value};
  double worst = 0.0;
  for (int k = 0; k < 3; ++k)
    worst = std::max(worst, std::abs(o.levels[static_cast<std::size_t>(k)] - formula[k]) / formula[k]);
  const double unit = p.alpha;
  std::printf("  shell n1+n2=2 shifts: formula diagonal (13, 12, 13), oracle (%.4f, %.4f, %.4f)\n",
              (o.levels[3] - 3.0) / unit, (o.levels[4] - 3.0) / unit, (o.levels[5] - 3.0) / unit);
  return {worst <= 1e-8, fmt("n1+n2<=1 max rel %.2e (tol 1e-8), basis 32 doubling delta %.1e", worst,
                             o.convergence_delta)};
}

Outcome green() {
  double worst = 0.0, bessel = 0.0;
  for (double eps : {0.25, 0.5, 1.0, 2.0})
    for (double r : {0.5, 1.0, 2.0})
      for (double x : {0.0, 0.005, 0.01}) {
        const GreenQuery g{eps, {0.0, 0.0}, {r, 0.0}, {1.0, 1.0, 0.0, x / eps, 2}};
        const double closed = green_free_2d_closed(g);
        worst = std::max(worst, std::abs(laplace_numeric(g).value - closed) / std::abs(closed));
      }
  for (int nu : {0, 1})
    for (int k = 0; k <= 400; ++k) {
      const double z = 0.1 * std::pow(200.0, k / 400.0);
      const double oracle = bessel_k_integral(nu, z);
      bessel = std::max(bessel, std::abs(bessel_k(nu, z) - oracle) / oracle);
    }
  return {worst <= 1e-6 && bessel <= 1e-10,
          fmt("Laplace vs closed max rel %.2e (tol 1e-6), K0/K1 vs integral max rel %.2e (tol 1e-10)", worst, bessel)};
}

Outcome minimal_length_check() {
  const double alpha = 1.0, hbar = 1.0;
  std::vector<double> grid;
  const int n = 2001;
  for (int k = 0; k < n; ++k) grid.push_back(0.2 + 1.8 * k / (n - 1));
  const auto curve = bound_curve(alpha, hbar, grid);
  double lowest = 1e300;
  for (const auto& pt : curve) lowest = std::min(lowest, pt.second);
  const double step = 1.8 / (n - 1), target = std::sqrt(3.0 * alpha * hbar * hbar);
  // Second-order grid error at a smooth minimum: (1/2) Q''(x*) (step/2)^2.
  const double grid_err = 0.5 * (hbar / std::pow(1.0 / std::sqrt(3.0), 3)) * 0.25 * step * step;
  const bool curve_ok = lowest >= target - 1e-15 && lowest - target <= grid_err;
  const bool exact = uncertainty_bound({{1.0}, {0.0}, 1.0, 1.0}, 0) == 2.0 &&
                     uncertainty_bound({{1.0, 1.0}, {0.0, 0.0}, 0.0, 1.0}, 0) == 0.5 &&
                     minimal_length(1.0, 1.0).dq_min == std::sqrt(3.0);
  return {curve_ok && exact, fmt("grid min - sqrt(3) = %.2e (grid error %.2e), uncertainty_bound(1,1) = 2 %s",
                                 lowest - target, grid_err, exact ? "exact" : "wrong")};
}

Outcome determinism() {
  SuiteConfig cfg;
  cfg.trials = 10;
  cfg.seed = 7;
  SuiteConfig threaded = cfg;
  threaded.jobs = 4;
  bool same = true;
  for (const auto& name : suite_names()) {
    const auto a = to_json(run_suite(name, cfg)).dump(), b = to_json(run_suite(name, cfg)).dump();
    const auto c = to_json(run_suite(name, threaded)).dump();
    same = same && a == b && a == c;
  }
  return {same, fmt("%zu suites, seed 7, repeated and --jobs 4 runs %s", suite_names().size(),
                    same ? "byte-identical" : "differ")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"closed moments vs Gauss-Hermite", moments_vs_quadrature},
      {"spectral vs direct free kernel", spectral_vs_direct},
      {"beta constants fixed by composition", beta_fixing},
      {"bracket and prefactor coefficients", coefficient_identities},
      {"omega -> 0 reduction", small_omega},
      {"Schrodinger residual", schrodinger},
      {"delta-function limit", delta_limit},
      {"equation of motion residual", eom},
      {"oscillator spectrum", spectrum},
      {"Green's function and Bessel", green},
      {"minimal length", minimal_length_check},
      {"determinism", determinism},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, check] : criteria) {
    ++index;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", index - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

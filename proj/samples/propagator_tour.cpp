// Free and oscillator propagators at a few times, with and without the GUP term.

#include <cstdio>

#include "gupqm/gupqm.hpp"

using namespace gupqm;

int main() {
  const Endpoints base{{0.0, 0.0}, {1.0, 0.5}, TimeArg::real(1.0)};
  std::printf("%-6s %-5s %-8s %24s %24s\n", "system", "T", "alpha", "K", "K (linearized)");
  for (double omega : {0.0, 1.0})
    for (double T : {0.5, 1.0, 2.0})
      for (double alpha : {0.0, 1e-3}) {
        const ModelParams p{1.0, 1.0, omega, alpha, 2};
        Endpoints e = base;
        e.time = TimeArg::real(T);
        const auto k = kernel(p, e);
        std::printf("%-6s %-5.2f %-8.0e %11.6f %+11.6fi %11.6f %+11.6fi\n", omega > 0 ? "sho" : "free", T, alpha,
                    k.amplitude.real(), k.amplitude.imag(), k.linearized().real(), k.linearized().imag());
      }

  // Classical action along the first-order path, checked against the closed form.
  const ModelParams p{1.0, 1.0, 1.0, 1e-3, 2};
  const auto a = sho_action(p, base);
  const auto path = sho_trajectory_2d(p, base);
  std::printf("\nS0 = %.12f  S1 = %.12f  S0 + alpha S1 = %.12f\n", a.S0, a.S1, a.total(p.alpha));
  std::printf("max EOM residual along the path: %.3e\n", eom_max_residual(p, base));
  std::printf("midpoint q(T/2) = (%.6f, %.6f)\n", path_eval(path, 0.5)[0], path_eval(path, 0.5)[1]);
}

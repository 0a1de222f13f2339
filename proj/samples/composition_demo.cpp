// Shows that only the canonical prefactor constants make K * K = K hold at O(alpha).

#include <cstdio>

#include "gupqm/gupqm.hpp"

using namespace gupqm;

int main() {
  const CompositionSplit split{{{0.3, -0.4}, {-0.2, 0.7}, TimeArg::real(1.6)}, TimeArg::real(0.7)};
  for (int dim : {1, 2, 3}) {
    std::vector<double> q0(split.endpoints.q0.begin(), split.endpoints.q0.end());
    std::vector<double> qf(split.endpoints.qf.begin(), split.endpoints.qf.end());
    q0.resize(static_cast<std::size_t>(dim), 0.1);
    qf.resize(static_cast<std::size_t>(dim), -0.1);
    const CompositionSplit s{{VecD(q0), VecD(qf), split.endpoints.time}, split.t1};
    const ModelParams p{1.0, 1.0, 1.0, 1e-3, dim};
    const auto c = canonical_betas(dim);
    std::printf("D=%d  beta = (%lld/%lld, %lld/%lld, %lld)\n", dim, c.beta1.num, c.beta1.den, c.beta2.num, c.beta2.den,
                c.beta3.num);
    std::printf("  canonical         residual %.3e\n", composition_check_analytic(p, s).relative());
    for (int which = 0; which < 3; ++which) {
      auto spec = PrefactorSpec::canonical(dim);
      (which == 0 ? spec.beta1 : which == 1 ? spec.beta2 : spec.beta3) += 0.1;
      std::printf("  beta%d + 0.1        residual %.3e\n", which + 1,
                  composition_check_analytic(p, s, spec).relative());
    }
  }
  const ModelParams p{1.0, 1.0, 1.0, 1e-3, 2};
  const CompositionSplit euclid{{{0.3, -0.4}, {-0.2, 0.7}, TimeArg::euclidean(1.6)}, TimeArg::euclidean(0.7)};
  std::printf("\nEuclidean D=2, Gauss-Hermite quadrature over the midpoint: residual %.3e\n",
              composition_check_quadrature(p, euclid, 64).relative());
  const auto ds = delta_S_check(p, split);
  std::printf("Delta S: formula %.12f%+.12fi, moment engine %.12f%+.12fi\n", ds.formula.real(), ds.formula.imag(),
              ds.engine.real(), ds.engine.imag());
}

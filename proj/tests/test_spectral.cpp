#include <gtest/gtest.h>

#include "gupqm/spectral.hpp"

using namespace gupqm;

TEST(PlaneWave, Dispersion) {
  EXPECT_EQ(plane_wave_energy({2.0, 0.0}, {1.0, 1.0, 0.0, 0.0, 2}), 2.0);
  EXPECT_NEAR(plane_wave_energy({0.6, 0.8}, {1.0, 1.0, 0.0, 0.01, 2}), 0.51, 1e-15);
  EXPECT_NEAR(plane_wave_energy({0.0, 2.0}, {1.0, 1.0, 0.0, 0.01, 2}), 2.16, 1e-15);
}

TEST(Formula, TwoDimensionalLevels) {
  const ModelParams p{1.0, 1.0, 1.0, 1e-3, 2};
  EXPECT_NEAR(sho_energy_2d(0, 0, p).value, 1.002, 1e-15);
  EXPECT_NEAR(sho_energy_2d(1, 0, p).value, 2.006, 1e-15);
  EXPECT_EQ(sho_energy_2d(1, 0, p).value, sho_energy_2d(0, 1, p).value);
  EXPECT_EQ(sho_energy_2d(3, 4, {1.0, 0.5, 2.0, 0.0, 2}).value, 8.0);
  EXPECT_THROW(sho_energy_2d(-1, 0, p), DomainError);
}

TEST(Formula, ShellTwoDiagonalCoefficients) {
  const ModelParams p{1.0, 1.0, 1.0, 1.0, 2};
  EXPECT_EQ(sho_energy_2d(2, 0, p).value - 3.0, 13.0);
  EXPECT_EQ(sho_energy_2d(1, 1, p).value - 3.0, 12.0);
  EXPECT_EQ(sho_energy_2d(0, 2, p).value - 3.0, 13.0);
}

TEST(Formula, SortedLevels) {
  const auto levels = sho_formula_levels({1.0, 1.0, 1.0, 1e-3, 2}, 6);
  ASSERT_EQ(levels.size(), 6u);
  for (std::size_t k = 1; k < levels.size(); ++k) EXPECT_LE(levels[k - 1].value, levels[k].value);
  EXPECT_EQ(levels[3].n1, 1);
  EXPECT_EQ(levels[3].n2, 1);
  EXPECT_THROW(sho_formula_levels({1.0, 1.0, 1.0, 0.0, 3}, 3), DomainError);
}

TEST(Oracle, ExactAtAlphaZero) {
  const auto o = oscillator_matrix_oracle({1.0, 1.0, 1.0, 0.0, 1}, 32, 8);
  for (int n = 0; n < 8; ++n) EXPECT_NEAR(o.levels[static_cast<std::size_t>(n)], n + 0.5, 1e-13);
}

TEST(Oracle, OneDimensionalGroundState) {
  const ModelParams p{1.0, 1.0, 1.0, 1e-5, 1};
  const auto o = oscillator_matrix_oracle(p, 32, 4);
  EXPECT_NEAR(o.levels[0], 0.5 + 0.75e-5, 1e-9);
  for (int n = 0; n < 4; ++n)
    EXPECT_NEAR(o.levels[static_cast<std::size_t>(n)] / sho_energy_1d(n, p).value, 1.0, 1e-8) << n;
}

TEST(Oracle, FirstOrderShiftFromTwoAlphas) {
  // (E(a) - E(a/2)) * 2 / a isolates the first-order coefficient up to O(a).
  const auto a = oscillator_matrix_oracle({1.0, 1.0, 1.0, 2e-6, 1}, 32, 3);
  const auto b = oscillator_matrix_oracle({1.0, 1.0, 1.0, 1e-6, 1}, 32, 3);
  for (int n = 0; n < 3; ++n) {
    const double slope = (a.levels[static_cast<std::size_t>(n)] - b.levels[static_cast<std::size_t>(n)]) / 1e-6;
    EXPECT_NEAR(slope, 0.75 * (2.0 * n * n + 2.0 * n + 1.0), 1e-3);
  }
}

TEST(Oracle, TwoDimensionalLowLevels) {
  const ModelParams p{1.0, 1.0, 1.0, 1e-5, 2};
  const auto o = oscillator_matrix_oracle(p, 32, 3);
  EXPECT_NEAR(o.levels[0], 1.0 + 2e-5, 1e-9);
  EXPECT_NEAR(o.levels[1], sho_energy_2d(1, 0, p).value, 1e-8 * o.levels[1]);
  EXPECT_NEAR(o.levels[2], sho_energy_2d(0, 1, p).value, 1e-8 * o.levels[2]);
  EXPECT_LT(o.convergence_delta, 1e-10);
}

TEST(Oracle, ShellTwoMixes) {
  // The quartic term couples (2,0) and (0,2): block eigenvalues 12, 12, 14.
  const double alpha = 1e-6;
  const auto o = oscillator_matrix_oracle({1.0, 1.0, 1.0, alpha, 2}, 32, 6);
  EXPECT_NEAR((o.levels[3] - 3.0) / alpha, 12.0, 1e-3);
  EXPECT_NEAR((o.levels[4] - 3.0) / alpha, 12.0, 1e-3);
  EXPECT_NEAR((o.levels[5] - 3.0) / alpha, 14.0, 1e-3);
}

TEST(Oracle, GuardsAndDomain) {
  EXPECT_THROW(oscillator_matrix_oracle({1.0, 1.0, 1.0, 1e-5, 2}, 8, 3), DomainError);
  EXPECT_THROW(oscillator_matrix_oracle({1.0, 1.0, 0.0, 1e-5, 1}, 32, 3), DomainError);
  // Large alpha: the truncated basis is far from converged.
  EXPECT_THROW(oscillator_matrix_oracle({1.0, 1.0, 1.0, 0.5, 1}, 16, 6), ConvergenceError);
}

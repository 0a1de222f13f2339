#include <gtest/gtest.h>

#include <set>

#include "gupqm/core.hpp"
#include "gupqm/parallel.hpp"
#include "gupqm/random.hpp"

using namespace gupqm;

TEST(Displacement, Pythagoras) {
  const Endpoints e{{0.0, 0.0}, {3.0, 4.0}, TimeArg::real(1.0)};
  EXPECT_EQ(displacement(e).norm2, 25.0);
}

TEST(Displacement, CoincidentAndShift) {
  EXPECT_EQ(displacement({{1.5, -2.0}, {1.5, -2.0}, TimeArg::real(1.0)}).norm2, 0.0);
  EXPECT_EQ(displacement({{1.0, 1.0, 1.0}, {2.0, 2.0, 2.0}, TimeArg::real(1.0)}).norm2, 3.0);
}

TEST(Displacement, MismatchThrows) {
  const Endpoints e{{0.0, 0.0}, {1.0}, TimeArg::real(1.0)};
  EXPECT_THROW(displacement(e), DimensionMismatch);
  EXPECT_THROW(e.validate(2), DimensionMismatch);
}

TEST(ModelParams, Validation) {
  EXPECT_NO_THROW((ModelParams{1.0, 1.0, 0.0, 0.0, 2}.validate()));
  EXPECT_THROW((ModelParams{0.0, 1.0, 0.0, 0.0, 1}.validate()), DomainError);
  EXPECT_THROW((ModelParams{1.0, -1.0, 0.0, 0.0, 1}.validate()), DomainError);
  EXPECT_THROW((ModelParams{1.0, 1.0, -1.0, 0.0, 1}.validate()), DomainError);
  EXPECT_THROW((ModelParams{1.0, 1.0, 0.0, 0.0, 0}.validate()), DomainError);
  EXPECT_THROW((ModelParams{1.0, 1.0, 0.0, std::nan(""), 1}.validate()), DomainError);
}

TEST(TimeArg, EuclideanIsNegativeImaginary) {
  const auto t = TimeArg::euclidean(2.5);
  EXPECT_EQ(t.value(), Complex(0.0, -2.5));
  EXPECT_EQ(t.magnitude(), 2.5);
  EXPECT_TRUE(t.is_euclidean());
  EXPECT_EQ((t + TimeArg::euclidean(0.5)).magnitude(), 3.0);
  EXPECT_THROW(t + TimeArg::real(1.0), DomainError);
  EXPECT_THROW(TimeArg::euclidean(0.0), DomainError);
  EXPECT_THROW(TimeArg::real(0.0), DomainError);
}

TEST(PrincipalPow, HalfIntegerPowersAreExact) {
  // (1/2 pi i)^1 at D = 2 has no real part at all.
  const Complex z = principal_pow(Complex(0.0, 2.0 * kPi), -1.0);
  EXPECT_EQ(z.real(), 0.0);
  const Complex h = principal_pow(Complex(0.0, 1.0), 0.5);
  EXPECT_NEAR(h.real(), std::sqrt(0.5), 1e-16);
  EXPECT_NEAR(h.imag(), std::sqrt(0.5), 1e-16);
  const Complex g = principal_pow(Complex(-4.0, 0.0), 1.5);
  EXPECT_NEAR(std::abs(g - Complex(0.0, -8.0)), 0.0, 1e-14);
  EXPECT_THROW(principal_pow(0.0, 0.5), DomainError);
}

TEST(PrincipalPow, GenericExponentMatchesExpLog) {
  const Complex b(0.3, -1.7);
  EXPECT_NEAR(std::abs(principal_pow(b, 0.3) - std::exp(0.3 * std::log(b))), 0.0, 1e-15);
}

TEST(CheckedSin, CausticThrows) {
  EXPECT_THROW(checked_sin(kPi), CausticError);
  EXPECT_NO_THROW(checked_sin(1.0));
  try {
    checked_sin(2.0 * kPi);
  } catch (const CausticError& e) {
    EXPECT_NEAR(e.omega_t().real(), 2.0 * kPi, 1e-15);
  }
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  auto a = trial_stream(7, 3), b = trial_stream(7, 3);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(a.next(), b.next());
  std::set<std::uint64_t> firsts;
  for (std::uint64_t i = 0; i < 100; ++i) firsts.insert(trial_stream(7, i).next());
  EXPECT_EQ(firsts.size(), 100u);
  auto u = trial_stream(1, 0);
  for (int k = 0; k < 1000; ++k) {
    const double x = u.uniform(-2.0, 3.0);
    ASSERT_GE(x, -2.0);
    ASSERT_LT(x, 3.0);
  }
}

TEST(Parallel, OrderIndependentOfJobs) {
  auto f = [](std::size_t i) { return trial_stream(11, i).uniform(); };
  EXPECT_EQ(parallel_map(64, 1, f), parallel_map(64, 4, f));
}

TEST(Parallel, LowestIndexExceptionWins) {
  auto f = [](std::size_t i) -> int {
    if (i == 5) throw DomainError("five");
    if (i == 9) throw ConvergenceError("nine");
    return static_cast<int>(i);
  };
  try {
    parallel_map(16, 3, f);
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_STREQ(e.what(), "five");
  }
}

#include <cmath>

#include <gtest/gtest.h>

#include "quantfield/monte_carlo.hpp"

namespace qf = quantfield;

TEST(MonteCarlo, ConstantOnUnitCube) {
  const qf::BoxDomain cube{{0, 0, 0}, {1, 1, 1}};
  const auto r = qf::mc_integrate([](std::span<const double>) { return 1.0; }, cube, 1000, 7);
  EXPECT_DOUBLE_EQ(r.value, 1.0);
  EXPECT_DOUBLE_EQ(r.std_error, 0.0);
}

TEST(MonteCarlo, GaussianInTruncatedBall) {
  const qf::BallDomain ball{{0, 0, 0}, 6.0};
  auto f = [](std::span<const double> x) { return std::exp(-(x[0] * x[0] + x[1] * x[1] + x[2] * x[2])); };
  const auto r = qf::mc_integrate(f, ball, 400000, 12345);
  EXPECT_NEAR(r.value, std::pow(M_PI, 1.5), 3.0 * r.std_error);
  EXPECT_LT(r.std_error, 0.05 * r.value);
}

TEST(MonteCarlo, DeterministicUnderSeed) {
  const qf::BallDomain ball{{0, 0}, 1.0};
  auto f = [](std::span<const double> x) { return x[0] * x[0]; };
  const auto a = qf::mc_integrate(f, ball, 5000, 99);
  const auto b = qf::mc_integrate(f, ball, 5000, 99);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(MonteCarlo, RejectsBadDomains) {
  auto f = [](std::span<const double>) { return 1.0; };
  EXPECT_THROW(qf::mc_integrate(f, qf::BoxDomain{{0}, {0}}, 10, 1), qf::InvalidInput);
  EXPECT_THROW(qf::mc_integrate(f, qf::BallDomain{{0, 0, 0, 0, 0}, 1.0}, 10, 1), qf::InvalidInput);
  EXPECT_THROW(qf::mc_integrate(f, qf::BallDomain{{0}, -1.0}, 10, 1), qf::InvalidInput);
}

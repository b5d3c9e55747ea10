#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "quantfield/differentiation.hpp"

namespace qf = quantfield;

TEST(FdLaplacian, QuadraticIsExact) {
  const std::vector<double> x = {0.3, -1.2};
  const double lap = qf::fd_laplacian([](std::span<const double> p) { return p[0] * p[0] + p[1] * p[1]; }, x, 1e-3);
  EXPECT_NEAR(lap, 4.0, 1e-6);
}

TEST(FdLaplacian, HarmonicPolynomialVanishes) {
  const std::vector<double> x = {0.7, 0.4};
  auto f = [](std::span<const double> p) { return p[0] * p[0] * p[0] - 3.0 * p[0] * p[1] * p[1]; };
  EXPECT_NEAR(qf::fd_laplacian(f, x, 1e-3, true), 0.0, 1e-7);
}

TEST(FdLaplacian, RichardsonImprovesAccuracy) {
  const std::vector<double> x = {0.5};
  auto f = [](std::span<const double> p) { return std::sin(p[0]); };
  const double plain = qf::fd_laplacian(f, x, 1e-2);
  const double extrapolated = qf::fd_laplacian(f, x, 1e-2, true);
  EXPECT_LT(std::fabs(extrapolated + std::sin(0.5)), std::fabs(plain + std::sin(0.5)));
}

TEST(Kappa, LinearLogIsFlat) {
  auto p = [](const qf::PlanckPoint& s) { return qf::LogValue::from_log(2.5 * s.im()); };
  EXPECT_NEAR(qf::kappa_from_log(p, qf::PlanckPoint(0.3, 1.0)).kappa, 0.0, 1e-9);
}

// d^2/dy^2 (-c log y) = c / y^2, so kappa = c / (4 y^2).
TEST(Kappa, PowerLawConvention) {
  for (double c : {0.5, 1.0, 1.5, 3.0})
    for (double y : {0.5, 1.0, 2.0}) {
      auto p = [c](const qf::PlanckPoint& s) { return qf::LogValue::from_log(-c * std::log(s.im())); };
      EXPECT_NEAR(qf::kappa_from_log(p, qf::PlanckPoint::on_axis(y)).kappa, c / (4.0 * y * y), 1e-8)
          << "c=" << c << " y=" << y;
    }
  auto p = [](const qf::PlanckPoint& s) { return qf::LogValue::from_log(-1.5 * std::log(s.im())); };
  EXPECT_NEAR(qf::kappa_from_log(p, qf::PlanckPoint::on_axis(1.0)).kappa, 0.375, 1e-8);
}

TEST(Kappa, ScaleInvariance) {
  auto p = [](const qf::PlanckPoint& s) {
    return qf::LogValue::from_log(s.im() * s.im() + std::log(1.0 + s.im()));
  };
  auto scaled = [&](const qf::PlanckPoint& s) { return p(s).scaled_by_exp(std::log(37.0)); };
  const qf::PlanckPoint s(0.0, 1.3);
  // A constant offset in log p only moves roundoff: |log p| eps / h^2.
  EXPECT_NEAR(qf::kappa_from_log(p, s).kappa, qf::kappa_from_log(scaled, s).kappa, 1e-9);
}

TEST(Kappa, TwoDimensionalPathAgreesAndSeesX) {
  // log p = x^2 + y^2 -> kappa = (2 + 2)/4 = 1 on the full stencil.
  auto p = [](const qf::PlanckPoint& s) { return qf::LogValue::from_log(s.re() * s.re() + s.im() * s.im()); };
  qf::KappaOptions opts;
  opts.verify_2d = true;
  const auto r = qf::kappa_from_log(p, qf::PlanckPoint(0.2, 1.0), opts);
  EXPECT_NEAR(r.kappa, 0.5, 1e-7);
  ASSERT_TRUE(r.kappa_2d.has_value());
  EXPECT_NEAR(*r.kappa_2d, 1.0, 1e-7);
}

TEST(Kappa, NonPositiveSampleIsAnError) {
  auto p = [](const qf::PlanckPoint&) { return qf::LogValue::from_value(-1.0); };
  EXPECT_THROW(qf::kappa_from_log(p, qf::PlanckPoint::on_axis(1.0)), qf::DomainError);
}

TEST(PlanckPoint, RejectsLowerHalfPlane) {
  EXPECT_THROW(qf::PlanckPoint(0.0, 0.0), qf::InvalidInput);
  EXPECT_THROW(qf::PlanckPoint(1.0, -2.0), qf::InvalidInput);
}

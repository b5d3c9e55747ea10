#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "quantfield/hilbert/json_io.hpp"

namespace qf = quantfield;
namespace hf = quantfield::hilbert;
using hf::Complex;
using hf::Matrix;
using hf::Point;

namespace {

Point pt(double x, double y) {
  Point p(2);
  p << x, y;
  return p;
}

hf::ConnectionField without_derivatives(hf::ConnectionField cf) {
  cf.derivative = nullptr;
  return cf;
}

Matrix random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(n, n);
}

const Complex kI(0.0, 1.0);

}  // namespace

TEST(Curvature, ZeroConnection) {
  const auto s = hf::curvature_at(hf::examples::zero(3), pt(0.2, -0.4), 0, 1);
  EXPECT_EQ(s.value.norm(), 0.0);
}

TEST(Curvature, AbelianLinearPotential) {
  for (const auto& cf : {hf::examples::abelian_area(), without_derivatives(hf::examples::abelian_area())}) {
    const auto s = hf::curvature_at(cf, pt(0.3, 1.1), 0, 1);
    EXPECT_NEAR(std::abs(s.value(0, 0) - (-kI)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(hf::curvature_at(cf, pt(0.3, 1.1), 1, 0).value(0, 0) - kI), 0.0, 1e-9);
  }
}

TEST(Curvature, ConstantNonCommuting) {
  const Matrix ax = hf::examples::i_pauli(0), ay = hf::examples::i_pauli(1);
  const auto cf = without_derivatives(hf::examples::constant({ax, ay}));
  const auto s = hf::curvature_at(cf, pt(-0.5, 0.5), 0, 1);
  EXPECT_LE((s.value - (ax * ay - ay * ax)).norm(), 1e-12);
  EXPECT_GT(s.value.norm(), 1.0);
}

TEST(Curvature, RejectsBadArguments) {
  const auto cf = without_derivatives(hf::examples::abelian_area(1.0));
  EXPECT_THROW(hf::curvature_at(cf, pt(0.0, 0.0), 0, 0), qf::InvalidInput);
  EXPECT_THROW(hf::curvature_at(cf, pt(1.0, 0.0), 0, 1), qf::InvalidInput);
  EXPECT_THROW(hf::curvature_at(cf, pt(1.0 - 1e-6, 0.0), 0, 1), qf::InvalidInput);
  EXPECT_THROW(hf::curvature_at(cf, pt(3.0, 0.0), 0, 1), qf::InvalidInput);
  EXPECT_NO_THROW(hf::curvature_at(cf, pt(0.99, 0.0), 0, 1));
  EXPECT_THROW(hf::curvature_at(cf, pt(1.0 - 3e-4, 0.0), 0, 1), qf::InvalidInput);
}

TEST(Classify, Examples) {
  const hf::GridSpec grid{{6, 6}};
  EXPECT_EQ(hf::classify(hf::examples::zero(2), grid, 1e-8).kind, hf::Flatness::Flat);

  const auto scalar = hf::classify(hf::examples::linear_potential(Eigen::Vector2d(1.0, 1.0)), grid, 1e-8);
  ASSERT_EQ(scalar.kind, hf::Flatness::ProjectivelyFlat);
  ASSERT_EQ(scalar.r_field.size(), 36u);
  for (const auto& r : scalar.r_field) EXPECT_LE(std::abs(r.r - (-kI)), 1e-12);

  const auto mixed = hf::classify(hf::examples::linear_potential(Eigen::Vector2d(1.0, 2.0)), grid, 1e-8);
  ASSERT_EQ(mixed.kind, hf::Flatness::NotProjectivelyFlat);
  ASSERT_TRUE(mixed.witness.has_value());
  EXPECT_NEAR(std::abs(mixed.witness->value(0, 0) - (-kI)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(mixed.witness->value(1, 1) - (-2.0 * kI)), 0.0, 1e-12);

  const auto pure = hf::examples::pure_gauge(hf::examples::i_pauli(0), hf::examples::i_pauli(2));
  const auto verdict = hf::classify(pure, grid, 1e-7);
  EXPECT_EQ(verdict.kind, hf::Flatness::Flat);
  EXPECT_LE(verdict.max_curvature_norm, 1e-7);
}

TEST(Classify, InvariantUnderConstantUnitaryGauge) {
  const hf::GridSpec grid{{5, 4}};
  const std::vector<hf::ConnectionField> fields = {
      hf::examples::zero(2),
      hf::examples::linear_potential(Eigen::Vector2d(1.0, 1.0)),
      hf::examples::linear_potential(Eigen::Vector2d(1.0, 2.0)),
      hf::examples::constant({hf::examples::i_pauli(0), hf::examples::i_pauli(1)}),
      hf::examples::pure_gauge(hf::examples::i_pauli(0), hf::examples::i_pauli(1)),
  };
  std::uint64_t seed = 1;
  for (const auto& cf : fields) {
    const auto g = random_unitary(cf.fiber_dim, seed++);
    const auto before = hf::classify(cf, grid, 1e-7);
    const auto after = hf::classify(hf::conjugate(cf, g), grid, 1e-7);
    EXPECT_EQ(before.kind, after.kind);
    EXPECT_NEAR(before.max_curvature_norm, after.max_curvature_norm, 1e-10);
    EXPECT_NEAR(before.max_traceless_norm, after.max_traceless_norm, 1e-10);
  }
}

TEST(Metric, CompatibilityForSkewHermitianForms) {
  const auto cf = hf::examples::pure_gauge(hf::examples::i_pauli(0), hf::examples::i_pauli(2));
  ASSERT_TRUE(cf.metric.has_value());
  EXPECT_LE(hf::metric_compatibility_residual(cf, pt(0.4, -0.9)), 1e-13);
  EXPECT_LE(hf::metric_compatibility_residual(hf::examples::abelian_area(), pt(0.4, 1.5)), 1e-15);
  auto real = hf::examples::constant({Matrix::Identity(1, 1), Matrix::Zero(1, 1)});
  real.metric = Matrix::Identity(1, 1);
  EXPECT_NEAR(hf::metric_compatibility_residual(real, pt(0.0, 0.0)), 2.0, 1e-15);
}

TEST(ConnectionValidation, RejectsMalformedFields) {
  auto cf = hf::examples::zero(2);
  cf.metric = Matrix::Identity(2, 2) * -1.0;
  EXPECT_THROW(hf::validate(cf), qf::InvalidInput);
  auto flipped = hf::examples::zero(2);
  flipped.upper(0) = flipped.lower(0);
  EXPECT_THROW(hf::validate(flipped), qf::InvalidInput);
  auto wrong = hf::examples::zero(2);
  wrong.form = [](const Point&) { return std::vector<Matrix>(2, Matrix::Zero(3, 3)); };
  EXPECT_THROW(hf::classify(wrong, {{2, 2}}, 1e-8), qf::InvalidInput);
}

TEST(ConnectionJson, LinearInterpolationReproducesLinearForm) {
  const auto j = hf::connection_to_json(hf::examples::abelian_area(1.0), {5, 5}, 1);
  const auto cf = hf::connection_from_json(j);
  EXPECT_NEAR(std::abs(hf::curvature_at(cf, pt(0.13, -0.37), 0, 1).value(0, 0) - (-kI)), 0.0, 1e-9);
  const auto again = hf::connection_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_NEAR(std::abs(again.form(pt(0.5, 0.25))[0](0, 0) - 0.25 * kI), 0.0, 1e-15);
}

TEST(ConnectionJson, CubicInterpolationOfSmoothForm) {
  const auto exact = hf::examples::pure_gauge(hf::examples::i_pauli(0), hf::examples::i_pauli(1), 1.0);
  const auto cf = hf::connection_from_json(hf::connection_to_json(exact, {41, 41}, 3));
  const Point p = pt(0.317, -0.421);
  EXPECT_LE((cf.form(p)[1] - exact.form(p)[1]).norm(), 5e-5);
  EXPECT_TRUE(cf.metric.has_value());
  // The interpolant is only C1, so its curvature is flat to O(spacing^2).
  EXPECT_EQ(hf::classify(cf, {{4, 4}}, 2e-2).kind, hf::Flatness::Flat);
}

TEST(ConnectionJson, RejectsMalformedInput) {
  auto j = hf::connection_to_json(hf::examples::abelian_area(1.0), {3, 3}, 1);
  auto bad_order = j;
  bad_order["interpolation"] = 2;
  EXPECT_THROW(hf::connection_from_json(bad_order), qf::InvalidInput);
  auto short_samples = j;
  short_samples["samples"].erase(0);
  EXPECT_THROW(hf::connection_from_json(short_samples), qf::InvalidInput);
  auto missing = j;
  missing.erase("fiber_dim");
  EXPECT_THROW(hf::connection_from_json(missing), qf::InvalidInput);
}

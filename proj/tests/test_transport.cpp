#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "quantfield/hilbert/json_io.hpp"
#include "quantfield/quadrature.hpp"

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

const Complex kI(0.0, 1.0);

// Abelian field with non-uniform curvature:
// A(d_x) = i (y^2 + x y), A(d_y) = i sin(x).
hf::ConnectionField wavy_abelian() {
  hf::ConnectionField cf;
  cf.lower = pt(-2.0, -2.0);
  cf.upper = pt(2.0, 2.0);
  cf.fiber_dim = 1;
  cf.form = [](const Point& p) {
    return std::vector<Matrix>{Matrix::Constant(1, 1, kI * (p(1) * p(1) + p(0) * p(1))),
                               Matrix::Constant(1, 1, kI * std::sin(p(0)))};
  };
  return cf;
}

// -oint A along the path, by quadrature on each piece.
Complex minus_line_integral(const hf::ConnectionField& cf, const hf::BasePath& path) {
  double re = 0.0, im = 0.0;
  for (const auto& piece : path.pieces) {
    auto integrand = [&](double t, bool imag) {
      const Complex v = hf::contract(cf.form(piece.point(t)), piece.velocity(t))(0, 0);
      return imag ? v.imag() : v.real();
    };
    re -= qf::integrate_1d([&](double t) { return integrand(t, false); }, 0.0, 1.0).value;
    im -= qf::integrate_1d([&](double t) { return integrand(t, true); }, 0.0, 1.0).value;
  }
  return {re, im};
}

hf::BasePath circle(double cx, double cy, double r) {
  return hf::BasePath::smooth(
      [=](double t) { return pt(cx + r * std::cos(2 * M_PI * t), cy + r * std::sin(2 * M_PI * t)); },
      [=](double t) { return pt(-2 * M_PI * r * std::sin(2 * M_PI * t), 2 * M_PI * r * std::cos(2 * M_PI * t)); });
}

}  // namespace

TEST(Transport, ZeroConnectionIsIdentity) {
  const auto cf = hf::examples::zero(3);
  const auto r = hf::parallel_transport(cf, hf::BasePath::polyline({pt(0, 0), pt(1, 0.5), pt(-1, 1.5)}));
  EXPECT_TRUE(r.converged);
  EXPECT_LE((r.value - Matrix::Identity(3, 3)).norm(), 1e-15);
}

TEST(Transport, AbelianUnitSquare) {
  const auto cf = hf::examples::abelian_area();
  const auto ccw = hf::rectangle_loop(0.0, 0.0, 1.0, 1.0);
  const Complex t_ccw = hf::transport_or_throw(cf, ccw)(0, 0);
  EXPECT_NEAR(std::abs(t_ccw), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(t_ccw - std::exp(kI)), 0.0, 1e-9);
  EXPECT_NEAR(std::abs(t_ccw - std::exp(minus_line_integral(cf, ccw))), 0.0, 1e-9);

  const auto cw = hf::BasePath::polyline({pt(0, 0), pt(0, 1), pt(1, 1), pt(1, 0), pt(0, 0)});
  EXPECT_NEAR(std::abs(hf::transport_or_throw(cf, cw)(0, 0) - std::exp(-kI)), 0.0, 1e-9);
}

TEST(Transport, SmoothLoopEnclosesArea) {
  const auto cf = hf::examples::abelian_area();
  const Complex t = hf::transport_or_throw(cf, circle(0.2, -0.3, 0.8))(0, 0);
  EXPECT_NEAR(std::arg(t), M_PI * 0.64 - 2 * M_PI * std::round(0.64 / 2), 1e-8);
}

TEST(Transport, StokesConsistencyForAbelianField) {
  const auto cf = wavy_abelian();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> corner(-1.8, 0.2), side(0.2, 1.4);
  for (int trial = 0; trial < 8; ++trial) {
    const double x0 = corner(rng), y0 = corner(rng), x1 = x0 + side(rng), y1 = y0 + side(rng);
    const Complex loop = hf::transport_or_throw(cf, hf::rectangle_loop(x0, y0, x1, y1))(0, 0);
    const std::vector<double> lo{x0, y0}, hi{x1, y1};
    const auto flux = qf::integrate_box(
        [&](std::span<const double> x) {
          return (hf::curvature_at(cf, pt(x[0], x[1]), 0, 1).value(0, 0) / kI).real();
        },
        lo, hi);
    // arg is only defined mod 2 pi.
    const double diff = std::remainder(std::arg(loop) + flux.value, 2 * M_PI);
    EXPECT_LE(std::fabs(diff), 1e-6) << "trial " << trial;
    EXPECT_NEAR(std::abs(loop), 1.0, 1e-9);
  }
}

TEST(Transport, UnitaryForSkewHermitianForms) {
  const std::vector<hf::ConnectionField> fields = {
      hf::examples::pure_gauge(hf::examples::i_pauli(0), hf::examples::i_pauli(1)),
      hf::examples::linear_potential(Eigen::Vector3d(1.0, -2.0, 0.5)),
      hf::examples::constant({hf::examples::i_pauli(2), hf::examples::i_pauli(0)}),
  };
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  for (const auto& cf : fields)
    for (int trial = 0; trial < 5; ++trial) {
      const auto path = hf::BasePath::polyline({pt(u(rng), u(rng)), pt(u(rng), u(rng)), pt(u(rng), u(rng))});
      const Matrix f = hf::transport_or_throw(cf, path);
      const Matrix h = cf.metric.value_or(Matrix::Identity(cf.fiber_dim, cf.fiber_dim));
      EXPECT_LE((f.adjoint() * h * f - h).norm(), 1e-8);
    }
}

TEST(Transport, Composition) {
  const std::vector<hf::ConnectionField> fields = {
      hf::examples::constant({hf::examples::i_pauli(0), hf::examples::i_pauli(1)}),
      hf::examples::linear_potential(Eigen::Vector2d(1.0, 2.0)),
      wavy_abelian(),
  };
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const auto& cf : fields)
    for (int trial = 0; trial < 6; ++trial) {
      const Point a = pt(u(rng), u(rng)), b = pt(u(rng), u(rng)), c = pt(u(rng), u(rng)), d = pt(u(rng), u(rng));
      const auto first = hf::BasePath::polyline({a, b, c});
      const auto second = hf::BasePath::polyline({c, d, a});
      const Matrix whole = hf::transport_or_throw(cf, first.then(second));
      const Matrix parts = hf::transport_or_throw(cf, second) * hf::transport_or_throw(cf, first);
      EXPECT_LE((whole - parts).norm(), 1e-9);
    }
}

TEST(Transport, FlatLoopsReturnIdentity) {
  const auto cf = hf::examples::pure_gauge(hf::examples::i_pauli(0), hf::examples::i_pauli(1));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> corner(-1.4, 0.0), side(0.1, 1.4);
  for (int trial = 0; trial < 20; ++trial) {
    const double x0 = corner(rng), y0 = corner(rng);
    const Matrix f = hf::transport_or_throw(cf, hf::rectangle_loop(x0, y0, x0 + side(rng), y0 + side(rng)));
    EXPECT_LE((f - Matrix::Identity(2, 2)).norm(), 1e-8) << "loop " << trial;
  }
}

TEST(Transport, FlagsFailureAndRejectsBadPaths) {
  const auto cf = hf::examples::abelian_area(1.0);
  auto path = hf::BasePath::segment(pt(0, 0), pt(0.5, 0.5));
  EXPECT_FALSE(hf::parallel_transport(cf, path, 1).converged);
  EXPECT_THROW(hf::parallel_transport(cf, hf::BasePath::segment(pt(0, 0), pt(1.5, 0))), qf::InvalidInput);
  auto broken = hf::BasePath::segment(pt(0, 0), pt(0.5, 0)).then(hf::BasePath::segment(pt(0.6, 0), pt(0.7, 0)));
  EXPECT_THROW(hf::parallel_transport(cf, broken), qf::InvalidInput);
  path.abs_tol = 0.0;
  EXPECT_THROW(hf::parallel_transport(cf, path), qf::InvalidInput);
}

TEST(Trivialize, ZeroConnectionGivesIdentityFrames) {
  const auto t = hf::trivialize(hf::examples::zero(2), pt(0, 0), {{4, 4}});
  ASSERT_EQ(t.frames.size(), 16u);
  for (const auto& f : t.frames) EXPECT_LE((f - Matrix::Identity(2, 2)).norm(), 1e-15);
}

TEST(Trivialize, ConstantAbelianFrame) {
  const double c = 0.7;
  const auto cf = hf::examples::constant({Matrix::Constant(1, 1, kI * c), Matrix::Zero(1, 1)});
  const auto t = hf::trivialize(cf, pt(0, 0), {{5, 5}});
  EXPECT_LE(t.path_independence, 1e-10);
  for (std::size_t i = 0; i < t.points.size(); ++i)
    EXPECT_NEAR(std::abs(t.frames[i](0, 0) - std::exp(-kI * c * t.points[i](0))), 0.0, 1e-10);
}

TEST(Trivialize, NonAbelianPureGauge) {
  const auto cf = hf::examples::pure_gauge(hf::examples::i_pauli(0), hf::examples::i_pauli(1));
  const auto t = hf::trivialize(cf, pt(-0.2, 0.3), {{4, 4}});
  EXPECT_LE(t.path_independence, 1e-8);
  for (const auto& p : {pt(0.5, 0.5), pt(-0.9, 0.1), pt(0.2, -1.0)})
    EXPECT_LE(hf::gauge_residual(cf, pt(-0.2, 0.3), p), 1e-8);
  const auto j = hf::to_json(t);
  EXPECT_EQ(j["frames"].size(), 16u);
}

TEST(Trivialize, RefusesCurvedConnection) {
  const auto cf = hf::examples::abelian_area();
  try {
    hf::trivialize(cf, pt(0, 0), {{3, 3}});
    FAIL() << "expected refusal";
  } catch (const hf::CurvatureWitnessError& e) {
    EXPECT_NEAR(e.witness().value.norm(), 1.0, 1e-12);
  }
}

TEST(Twist, ZeroPotentialLeavesFlatFieldUnchanged) {
  const auto cf = hf::examples::zero(2);
  const auto twisted = hf::twist_to_flat(cf, [](const Point&) { return std::vector<Complex>{0.0, 0.0}; }, {{3, 3}});
  EXPECT_EQ(twisted.form(pt(0.3, 0.1))[0].norm(), 0.0);
}

TEST(Twist, ScalarCurvatureIsCancelled) {
  const auto cf = hf::examples::linear_potential(Eigen::Vector2d(1.0, 1.0));
  const hf::ScalarForm a = [](const Point& p) { return std::vector<Complex>{-kI * p(1), 0.0}; };
  const auto twisted = hf::twist_to_flat(cf, a, {{4, 4}});
  const auto verdict = hf::classify(twisted, {{5, 5}}, 1e-8);
  EXPECT_EQ(verdict.kind, hf::Flatness::Flat);
  const auto t = hf::trivialize(twisted, pt(0.1, 0.1), {{4, 4}});
  EXPECT_LE(t.path_independence, 1e-8);
}

TEST(Twist, RejectsWrongPotentialOrCurvedField) {
  const auto cf = hf::examples::linear_potential(Eigen::Vector2d(1.0, 1.0));
  const hf::ScalarForm wrong_sign = [](const Point& p) { return std::vector<Complex>{kI * p(1), 0.0}; };
  EXPECT_THROW(hf::twist_to_flat(cf, wrong_sign, {{3, 3}}), qf::InvalidInput);
  const hf::ScalarForm fine = [](const Point& p) { return std::vector<Complex>{-kI * p(1), 0.0}; };
  EXPECT_THROW(hf::twist_to_flat(hf::examples::linear_potential(Eigen::Vector2d(1.0, 2.0)), fine, {{3, 3}}),
               hf::CurvatureWitnessError);
}

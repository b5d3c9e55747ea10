#include <cmath>

#include <gtest/gtest.h>

#include "quantfield/quantization/model.hpp"
#include "quantfield/toeplitz/model.hpp"

using namespace quantfield;
using toeplitz::WeightedModel;

namespace {

// E[X^{2n}] for X ~ N(mu, sigma^2): E[X^j] = mu E[X^{j-1}] + (j-1) sigma^2 E[X^{j-2}].
double gaussian_even_moment(int n, double mu, double sigma2) {
  std::vector<double> e(2 * n + 1);
  e[0] = 1.0;
  if (2 * n >= 1) e[1] = mu;
  for (int j = 2; j <= 2 * n; ++j) e[j] = mu * e[j - 1] + (j - 1) * sigma2 * e[j - 2];
  return e[2 * n];
}

// int e^{tau z^2 + 2 k z} dz = sqrt(pi / -tau) e^{-k^2 / tau}.
double gaussian_mass(double tau, int k) { return std::sqrt(M_PI / -tau) * std::exp(-k * k / tau); }

// s with a(s) = a.
PlanckPoint point_for(double a) { return PlanckPoint::on_axis(-1.0 / a); }

}  // namespace

TEST(QScalar, IdentityAtReference) {
  for (int k : {0, 1, 3, 7})
    for (double t : {-0.4, -1.0, -3.0})
      EXPECT_NEAR(toeplitz::q_scalar({k, t}, t).real(), 1.0, 1e-13) << k << " " << t;
}

TEST(QScalar, GaussianRatios) {
  EXPECT_NEAR(toeplitz::q_scalar({0, -1.0}, -2.0).real(), 1.0 / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(toeplitz::q_scalar({1, -1.0}, -2.0).real(), std::exp(-0.5) / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(toeplitz::q_scalar({0, -1.0}, -2.0).real(), 0.70711, 5e-6);
  EXPECT_NEAR(toeplitz::q_scalar({1, -1.0}, -2.0).real(), 0.42888, 5e-6);
}

TEST(QScalar, MatchesClosedFormOnGrid) {
  for (int k = 0; k <= 6; ++k)
    for (double t : {-0.5, -1.0, -2.5})
      for (double tau : {0.6 * t, t, 2.0 * t, 5.0 * t}) {
        const double expected = gaussian_mass(tau, k) / gaussian_mass(t, k);
        const double got = toeplitz::q_scalar({k, t}, tau).real();
        EXPECT_NEAR(got / expected, 1.0, 1e-12) << k << " " << t << " " << tau;
      }
}

TEST(QScalar, PositiveAndIncreasing) {
  for (int k : {0, 2, 5})
    for (double t : {-0.6, -1.2, -1.9}) {
      double previous = 0.0;
      for (int i = 0; i < 40; ++i) {
        const double tau = 8.0 * t + i * (8.0 * t - 0.51 * t) / -39.0;
        const double q = toeplitz::q_scalar({k, t}, tau).real();
        EXPECT_GT(q, 0.0);
        EXPECT_GT(q, previous) << k << " " << t << " " << tau;
        previous = q;
      }
    }
}

TEST(QScalar, RejectsOutsideDomain) {
  EXPECT_THROW(toeplitz::q_scalar({0, -1.0}, -0.5), InvalidInput);
  EXPECT_THROW(toeplitz::q_scalar({0, -1.0}, 0.1), InvalidInput);
  EXPECT_THROW(toeplitz::q_scalar({0, 0.0}, -1.0), InvalidInput);
}

TEST(PToeplitz, ZerothIsWeightTimesQ) {
  for (bool corrected : {false, true})
    for (double y : {0.3, 0.7, 1.5}) {
      const WeightedModel model{2, -0.5, corrected};
      const auto s = PlanckPoint::on_axis(y);
      const auto w = quantization::weight_params(s, 1, corrected);
      EXPECT_NEAR(toeplitz::p_toeplitz(model, 0, s).real() / (std::exp(w.b) * toeplitz::q_scalar(model, w.a).real()),
                  1.0, 1e-13);
    }
}

TEST(PToeplitz, MomentExamples) {
  const auto s = PlanckPoint::on_axis(1.0);  // a = -1, b = 0 for m = 1
  EXPECT_NEAR(toeplitz::p_toeplitz({0, -1.0, false}, 1, s).real(), 0.5, 1e-13);
  EXPECT_NEAR(toeplitz::p_toeplitz({1, -1.0, false}, 1, s).real(), 1.5, 1e-13);
}

TEST(PToeplitz, MatchesShiftedGaussianMoments) {
  for (int k = 0; k <= 5; ++k)
    for (int n = 0; n <= 4; ++n)
      for (double a : {-1.0, -1.5, -3.0}) {
        const WeightedModel model{k, -1.2, false};
        const auto s = point_for(a);
        const double b = -std::log(s.im());
        const double expected =
            std::exp(b) * gaussian_mass(a, k) * gaussian_even_moment(n, -k / a, -0.5 / a) / gaussian_mass(-1.2, k);
        EXPECT_NEAR(toeplitz::p_toeplitz(model, n, s).real() / expected, 1.0, 1e-11) << k << " " << n << " " << a;
      }
  EXPECT_EQ(toeplitz::p_toeplitz({0}, 1, PlanckPoint::on_axis(1.0)).provenance, toeplitz::Provenance::Quadrature);
}

TEST(Lemma, ZerothOrderIsExact) {
  const auto r = toeplitz::verify_lemma({3, -1.0}, 0, point_for(-1.0));
  EXPECT_LE(r.residual, 1e-14);
}

TEST(Lemma, ReferenceExamples) {
  EXPECT_LE(toeplitz::verify_lemma({0, -1.9}, 1, point_for(-1.0)).residual, 1e-6);
  EXPECT_LE(toeplitz::verify_lemma({2, -1.9}, 2, point_for(-1.0)).residual, 1e-5);
}

TEST(Lemma, NormalisedMomentIsMoment) {
  // Q^{-1} Q^{(n)} at a is E[zeta^{2n}] under e^{a zeta^2 + 2 k zeta}.
  const auto r = toeplitz::verify_lemma({2, -1.2}, 3, point_for(-1.5));
  EXPECT_NEAR(r.p_ratio, gaussian_even_moment(3, 2.0 / 1.5, 0.5 / 1.5), 1e-11 * r.p_ratio);
}

TEST(Lemma, GridResidual) {
  double worst = 0.0;
  for (double a : {-1.0, -1.5, -2.0})
    for (double t : {-0.6, -1.2, -1.9})
      for (int k = 0; k <= 5; ++k)
        for (int n = 0; n <= 3; ++n)
          worst = std::max(worst, toeplitz::verify_lemma({k, t}, n, point_for(a)).residual);
  EXPECT_LE(worst, 1e-5);
}

TEST(Lemma, RejectsMissingMargin) {
  // t/2 = -0.95; a = -0.952 leaves less than the order-3 stencil reach.
  EXPECT_THROW(toeplitz::verify_lemma({0, -1.9}, 3, point_for(-0.952)), InvalidInput);
  EXPECT_NO_THROW(toeplitz::verify_lemma({0, -1.9}, 0, point_for(-0.952)));
  EXPECT_THROW(toeplitz::verify_lemma({0, -1.9}, 1, point_for(-0.9)), InvalidInput);
}

TEST(ToeplitzCurvature, CircleModel) {
  for (int k : {0, 1, 4, 9})
    for (double y : {0.5, 1.0, 1.7}) {
      const auto s = PlanckPoint::on_axis(y);
      const auto bare = toeplitz::toeplitz_curvature({k, -0.5, false}, s);
      EXPECT_NEAR(bare.kappa, 1.0 / (8.0 * y * y), 1e-7) << k << " " << y;
      EXPECT_NEAR(bare.kappa_identity, 1.0 / (8.0 * y * y), 1e-7) << k << " " << y;
      const auto corrected = toeplitz::toeplitz_curvature({k, -0.5, true}, s);
      EXPECT_NEAR(corrected.kappa, 0.0, 1e-7);
      EXPECT_NEAR(corrected.kappa_identity, 0.0, 1e-7);
    }
}

TEST(ToeplitzCurvature, MatchesTorusModel) {
  for (bool corrected : {false, true}) {
    const auto torus = quantization::torus_model(1, corrected);
    for (int k : {0, 2, 5})
      for (double y : {0.5, 1.0, 2.0}) {
        const auto s = PlanckPoint::on_axis(y);
        EXPECT_NEAR(toeplitz::toeplitz_curvature({k, -0.4, corrected}, s).kappa,
                    quantization::curvature(torus, k, s).kappa, 1e-6);
      }
  }
}

TEST(ToeplitzCurvature, ReferenceExponentIsIrrelevant) {
  const auto s = PlanckPoint::on_axis(0.8);
  const double k1 = toeplitz::toeplitz_curvature({3, -0.3, false}, s).kappa;
  const double k2 = toeplitz::toeplitz_curvature({3, -2.0, false}, s).kappa;
  EXPECT_NEAR(k1, k2, 1e-9);
}

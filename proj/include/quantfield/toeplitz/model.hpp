#pragma once

// Rank-one weighted model on the line: L(zeta) = zeta^2, the k-th character
// section e^{2 k zeta}, reference weight e^{t L}. Every Toeplitz operator is
// a scalar on the one-dimensional isotypical block.

#include <cmath>
#include <sstream>
#include <string>

#include "quantfield/differentiation.hpp"
#include "quantfield/log_value.hpp"
#include "quantfield/quadrature.hpp"
#include "quantfield/quantization/weights.hpp"

namespace quantfield::toeplitz {

struct WeightedModel {
  int k = 0;
  double reference_exponent = -0.5;  // t < 0
  bool corrected = false;            // b = -(1/2) log y instead of -log y
};

inline void validate(const WeightedModel& model) {
  require(model.reference_exponent < 0.0 && std::isfinite(model.reference_exponent),
          "reference exponent t must be negative");
}

enum class Provenance { Quadrature, DerivativeIdentity };

inline const char* to_string(Provenance p) {
  return p == Provenance::Quadrature ? "quadrature" : "derivative-identity";
}

struct ToeplitzScalar {
  LogValue value;
  Provenance provenance = Provenance::Quadrature;
  double real() const { return value.value(); }
};

namespace detail {

inline QuadratureSpec hermite_spec() {
  QuadratureSpec spec;
  spec.scheme = QuadratureScheme::GaussHermiteShifted;
  spec.hermite_order = 64;
  return spec;
}

// log int zeta^{2n} e^{tau zeta^2 + 2 k zeta} d zeta. The Gauss-Hermite rule
// is exact here, and smooth in tau.
inline LogValue moment(int n, double tau, int k) {
  auto g = [n](double z) {
    if (n == 0) return LogValue::from_log(0.0);
    if (z == 0.0) return LogValue::zero();
    return LogValue::from_log(2.0 * n * std::log(std::fabs(z)));
  };
  return gaussian_weighted(g, tau, static_cast<double>(k), hermite_spec());
}

inline void check_domain(const WeightedModel& model, double tau, const char* what) {
  if (!(tau < 0.5 * model.reference_exponent)) {
    std::ostringstream msg;
    msg << what << " = " << tau << " must be below t/2 = " << 0.5 * model.reference_exponent;
    throw InvalidInput(msg.str());
  }
}

}  // namespace detail

// Q_k(tau) = int e^{2 k zeta + tau zeta^2} / int e^{2 k zeta + t zeta^2}.
inline ToeplitzScalar q_scalar(const WeightedModel& model, double tau) {
  validate(model);
  detail::check_domain(model, tau, "tau");
  return {detail::moment(0, tau, model.k) / detail::moment(0, model.reference_exponent, model.k),
          Provenance::Quadrature};
}

// P_{k,n}(s) = e^{b(s)} int zeta^{2n} e^{2 k zeta + a(s) zeta^2} / int e^{2 k zeta + t zeta^2}.
inline ToeplitzScalar p_toeplitz(const WeightedModel& model, int n, const PlanckPoint& s) {
  validate(model);
  require(n >= 0, "moment order n must be non-negative");
  const auto w = quantization::weight_params(s, 1, model.corrected);
  detail::check_domain(model, w.a, "a(s)");
  const LogValue ratio = detail::moment(n, w.a, model.k) / detail::moment(0, model.reference_exponent, model.k);
  return {ratio.scaled_by_exp(w.b), Provenance::Quadrature};
}

// n-th tau-derivative of Q at tau by a second-order central stencil with
// step h, Richardson-combined with step 2h. Returns the derivative and the
// largest stencil offset.
inline std::pair<double, double> q_derivative(const WeightedModel& model, int n, double tau, double h) {
  require(n >= 0 && n <= 4, "derivative order must be in [0, 4]");
  require(h > 0.0, "finite-difference step must be positive");
  auto q = [&](double x) { return q_scalar(model, x).real(); };
  auto stencil = [&](double step) {
    switch (n) {
      case 0: return q(tau);
      case 1: return (q(tau + step) - q(tau - step)) / (2.0 * step);
      case 2: return (q(tau + step) - 2.0 * q(tau) + q(tau - step)) / (step * step);
      case 3:
        return (q(tau + 2 * step) - 2.0 * q(tau + step) + 2.0 * q(tau - step) - q(tau - 2 * step)) /
               (2.0 * step * step * step);
      default:
        return (q(tau + 2 * step) - 4.0 * q(tau + step) + 6.0 * q(tau) - 4.0 * q(tau - step) + q(tau - 2 * step)) /
               (step * step * step * step);
    }
  };
  const double reach = (n <= 2 ? 1.0 : 2.0) * 2.0 * h;
  if (n == 0) return {stencil(h), 0.0};
  return {(4.0 * stencil(h) - stencil(2.0 * h)) / 3.0, reach};
}

struct LemmaCheck {
  double p_ratio = 0.0;       // P_{k,n} / P_{k,0} from moments
  double q_identity = 0.0;    // Q^{-1} Q^{(n)} from finite differences
  double residual = 0.0;      // |p_ratio - q_identity| / p_ratio
};

// Compares the normalised Toeplitz scalar P_{k,n}/P_{k,0} with
// Q^{-1}(a) Q^{(n)}(a), Q^{(n)} by finite differences. Default step 1e-3 |t|.
inline LemmaCheck verify_lemma(const WeightedModel& model, int n, const PlanckPoint& s, double h = 0.0) {
  validate(model);
  if (h <= 0.0) h = 1e-3 * std::fabs(model.reference_exponent);
  const auto w = quantization::weight_params(s, 1, model.corrected);
  detail::check_domain(model, w.a, "a(s)");
  const double reach = (n == 0 ? 0.0 : (n <= 2 ? 2.0 : 4.0) * h);
  if (!(w.a + reach < 0.5 * model.reference_exponent)) {
    std::ostringstream msg;
    msg << "a(s) = " << w.a << " leaves no margin " << reach << " below t/2 for the order-" << n << " stencil";
    throw InvalidInput(msg.str());
  }
  LemmaCheck out;
  out.p_ratio = (p_toeplitz(model, n, s).value / p_toeplitz(model, 0, s).value).value();
  out.q_identity = q_derivative(model, n, w.a, h).first / q_scalar(model, w.a).real();
  out.residual = std::fabs(out.p_ratio - out.q_identity) / out.p_ratio;
  return out;
}

struct ToeplitzCurvature {
  double kappa = 0.0;           // (1/4) Laplacian log P_{k,0}
  double kappa_identity = 0.0;  // (1/4) d/dy of P^{-1} dP/dy via the moment identity
};

// kappa = (1/4) Laplacian_s log P_{k,0}(s). The second value differentiates
// P^{-1} dP/dy = b'(y) + a'(y) P_{k,1}/P_{k,0} once more by a central
// difference.
inline ToeplitzCurvature toeplitz_curvature(const WeightedModel& model, const PlanckPoint& s,
                                            const KappaOptions& options = {}) {
  validate(model);
  ToeplitzCurvature out;
  out.kappa = kappa_from_log([&](const PlanckPoint& q) { return p_toeplitz(model, 0, q).value; }, s, options).kappa;
  const double c = quantization::log_power(1, model.corrected);
  auto log_derivative = [&](double y) {
    const PlanckPoint q = PlanckPoint::on_axis(y);
    const double ratio = (p_toeplitz(model, 1, q).value / p_toeplitz(model, 0, q).value).value();
    return -c / y + ratio / (y * y);
  };
  const double y = s.im();
  const double h = options.rel_step * y;
  auto central = [&](double step) { return (log_derivative(y + step) - log_derivative(y - step)) / (2.0 * step); };
  out.kappa_identity = 0.25 * (4.0 * central(h) - central(2.0 * h)) / 3.0;
  return out;
}

}  // namespace quantfield::toeplitz

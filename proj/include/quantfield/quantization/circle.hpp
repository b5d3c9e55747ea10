#pragma once

// The circle with geodesic speeds cut off at r:
//   p(s) = e^b int_{-r}^{r} e^{a zeta^2 + 2 k zeta} d zeta,  m = 1.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quantfield/log_value.hpp"
#include "quantfield/quadrature.hpp"
#include "quantfield/quantization/weights.hpp"

namespace quantfield::quantization {

inline QuadratureSpec circle_quadrature_defaults() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-14;
  spec.abs_tol = 1e-300;
  return spec;
}

inline LogValue p_truncated_circle(const PlanckPoint& s, int k, double r, bool corrected,
                                   const QuadratureSpec& spec = circle_quadrature_defaults()) {
  require(r > 0.0 && std::isfinite(r), "truncation radius must be positive and finite");
  const auto w = weight_params(s, 1, corrected);
  const double y = s.im();
  auto exponent = [&](double z) { return w.a * z * z + 2.0 * k * z; };
  const double shift = exponent(std::clamp(k * y, -r, r));
  const auto res = integrate_1d([&](double z) { return std::exp(exponent(z) - shift); }, -r, r, spec);
  if (!res.converged) {
    std::ostringstream msg;
    msg << "truncated circle quadrature did not converge for k = " << k << ", r = " << r << ", Im s = " << y;
    throw NumericalFailure(msg.str());
  }
  return LogValue::from_log(w.b + shift + std::log(res.value));
}

// kappa of the r-dependent leading part a r^2 + b: (1/4) d^2/dy^2 (-r^2/y - c log y).
inline double truncated_circle_kappa_limit(double r, const PlanckPoint& s, bool corrected) {
  const double y = s.im();
  return 0.25 * (-2.0 * r * r / (y * y * y) + log_power(1, corrected) / (y * y));
}

}  // namespace quantfield::quantization

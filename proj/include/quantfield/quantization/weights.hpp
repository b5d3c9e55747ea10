#pragma once

// Gaussian weight exponents e^{a(s) L + b(s)} with L the squared-length
// function on the fibre.

#include <cmath>

#include "quantfield/errors.hpp"
#include "quantfield/planck.hpp"

namespace quantfield::quantization {

struct WeightParams {
  double a = -1.0;
  double b = 0.0;
  bool corrected = false;
  int m = 1;
};

// a = -1/y; b = -m log y (bare) or -(m/2) log y (half-form corrected).
inline WeightParams weight_params(const PlanckPoint& s, int m, bool corrected) {
  require(m >= 1, "manifold dimension must be positive");
  const double y = s.im();
  const double exponent = corrected ? 0.5 * m : static_cast<double>(m);
  return {-1.0 / y, -exponent * std::log(y), corrected, m};
}

// Coefficient c in b = -c log y.
inline double log_power(int m, bool corrected) { return corrected ? 0.5 * m : static_cast<double>(m); }

}  // namespace quantfield::quantization

#pragma once

// Spheres S^m = SO(m+1)/SO(m), reduced to geodesic speed t >= 0:
//   p(s) = e^b int_0^inf e^{a t^2} (sinh 2t)^q t^q phi_k(t) dt,  q = (m-1)/2,
//   phi_k(t) = int_0^pi (cosh 2t + sinh 2t cos u)^k sin^{m-2} u du.

#include <algorithm>
#include <cmath>
#include <sstream>

#include "quantfield/log_value.hpp"
#include "quantfield/quadrature.hpp"
#include "quantfield/quantization/weights.hpp"

namespace quantfield::quantization {

inline constexpr int kMaxSphereIndex = 200;

inline QuadratureSpec sphere_quadrature_defaults() {
  QuadratureSpec spec;
  spec.rel_tol = 1e-14;
  spec.abs_tol = 1e-300;
  spec.max_refinement = 4000;
  return spec;
}

namespace detail {

// log(phi_k(t) e^{-2kt}). The base cosh 2t + sinh 2t cos u equals
// e^{2t} (cos^2(u/2) + e^{-4t} sin^2(u/2)), so the remaining integrand is at
// most 1.
inline double log_reduced_phi(int k, int m, double t, const QuadratureSpec& spec) {
  const double damp = std::exp(-4.0 * t);
  auto f = [&](double u) {
    const double c = std::cos(0.5 * u), sn = std::sin(0.5 * u);
    const double base = c * c + damp * sn * sn;
    const double weight = m == 2 ? 1.0 : std::pow(std::sin(u), m - 2);
    return weight == 0.0 ? 0.0 : std::pow(base, k) * weight;
  };
  const auto r = integrate_1d(f, 0.0, M_PI, spec);
  if (!r.converged) {
    std::ostringstream msg;
    msg << "spherical_phi did not converge for k = " << k << ", m = " << m << ", t = " << t;
    throw NumericalFailure(msg.str());
  }
  return std::log(r.value);
}

}  // namespace detail

inline LogValue spherical_phi(int k, int m, double t, const QuadratureSpec& spec = sphere_quadrature_defaults()) {
  require(k >= 0, "k must be non-negative");
  require(m >= 2, "sphere dimension must be at least 2");
  require(t >= 0.0 && std::isfinite(t), "t must be finite and non-negative");
  return LogValue::from_log(2.0 * k * t + detail::log_reduced_phi(k, m, t, spec));
}

// (m-1)(m-3) / (8 (2k+m-1)^2 y^3): leading large-k curvature on S^m.
inline double sphere_asymptote(int k, int m, const PlanckPoint& s) {
  require(k >= 0, "k must be non-negative");
  require(m >= 1, "sphere dimension must be positive");
  const double y = s.im();
  const double d = 2.0 * k + m - 1.0;
  if (d == 0.0) return 0.0;
  return (m - 1.0) * (m - 3.0) / (8.0 * d * d * y * y * y);
}

// Exact slope (k + q)^2 of the part of log p that is linear in Im s.
inline double sphere_log_slope(int k, int m) {
  const double kq = k + 0.5 * (m - 1);
  return kq * kq;
}

// Half-form corrected p on S^m, returned as log p - baseline_slope * Im s.
//
// With t = (k+q) y + sqrt(y) theta the Gaussian and the growth e^{2(k+q)t}
// combine exactly into (k+q)^2 y - theta^2, so the integrand is built from
// O(1) terms only.
inline LogValue p_sphere(const PlanckPoint& s, int k, int m, const QuadratureSpec& spec = sphere_quadrature_defaults(),
                         double baseline_slope = 0.0) {
  require(m >= 2, "sphere dimension must be at least 2");
  require(k >= 0 && k <= kMaxSphereIndex, "sphere index k must lie in [0, 200]");
  spec.validate();
  const auto w = weight_params(s, m, true);
  const double y = s.im();
  const double root_y = std::sqrt(y);
  const double q = 0.5 * (m - 1);
  const double center = (k + q) * y;
  // Remaining log factors: q log t + q log((1 - e^{-4t})/2) + log(phi_k e^{-2kt}).
  auto log_rest = [&](double theta) {
    const double t = center + root_y * theta;
    return -theta * theta + q * (std::log(t) + std::log(-std::expm1(-4.0 * t)) - std::log(2.0)) +
           detail::log_reduced_phi(k, m, t, spec);
  };
  const double radius = spec.truncation_radius_sigma;
  const double lo = std::max(-radius, -center / root_y);
  const double hi = radius;
  double shift = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= 32; ++i) shift = std::max(shift, log_rest(lo + (hi - lo) * i / 32.0));
  auto f = [&](double theta) {
    return center + root_y * theta <= 0.0 ? 0.0 : std::exp(log_rest(theta) - shift);
  };
  const auto r = integrate_1d(f, lo, hi, spec);
  if (!r.converged || !(r.value > 0.0)) {
    std::ostringstream msg;
    msg << "p_sphere quadrature did not converge for k = " << k << ", m = " << m << ", Im s = " << y;
    throw NumericalFailure(msg.str());
  }
  return LogValue::from_log(w.b + (sphere_log_slope(k, m) - baseline_slope) * y + std::log(root_y) + shift +
                            std::log(r.value));
}

}  // namespace quantfield::quantization

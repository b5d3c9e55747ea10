#pragma once

// Integration over su(2) ~ R^3 against reduction to the torus: for radial f,
//   int_{R^3} f(|zeta|) d zeta  ~  int_R f(|t|) 4 t^2 dt
// up to a constant, since prod over all roots |alpha(t)| = 4 t^2. Ratios of
// two profiles cancel the constant.

#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>

#include "quantfield/monte_carlo.hpp"
#include "quantfield/quadrature.hpp"

namespace quantfield::quantization {

using RadialProfile = std::function<double(double)>;  // f as a function of |zeta|

struct ReductionCheck {
  double ratio_3d = 0.0;
  double ratio_3d_sigma = 0.0;
  double ratio_1d = 0.0;
  std::int64_t samples = 0;
  bool agree = false;  // within 3 sigma
};

struct ReductionOptions {
  double radius = 6.0;  // both integrals are cut at |zeta| = radius
  std::int64_t samples = 400000;
  std::int64_t max_samples = 6400000;
  // Relative 1-sigma error of the Monte Carlo ratio at which sampling stops.
  double target_rel_sigma = 5e-3;
};

inline ReductionCheck weyl_reduction_check(const RadialProfile& f1, const RadialProfile& f2, std::uint64_t seed,
                                           const ReductionOptions& options = {}) {
  require(options.radius > 0.0, "reduction radius must be positive");
  require(options.samples >= 2 && options.max_samples >= options.samples, "invalid Monte Carlo sample counts");
  const BallDomain ball{{0.0, 0.0, 0.0}, options.radius};

  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  auto reduced = [&](const RadialProfile& f) {
    const auto r = integrate_1d([&](double t) { return 4.0 * t * t * f(t); }, 0.0, options.radius, spec);
    if (!r.converged) throw NumericalFailure("reduced torus integral did not converge");
    return 2.0 * r.value;  // even integrand on [-radius, radius]
  };

  ReductionCheck out;
  out.ratio_1d = reduced(f1) / reduced(f2);
  for (std::int64_t n = options.samples;; n *= 2) {
    // One sample set for both profiles, so the ratio estimator is paired.
    const auto points = mc_sample_points(ball, n, seed);
    double s1 = 0.0, s2 = 0.0, s11 = 0.0, s22 = 0.0, s12 = 0.0;
    for (const auto& p : points) {
      const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      const double v1 = f1(r), v2 = f2(r);
      s1 += v1;
      s2 += v2;
      s11 += v1 * v1;
      s22 += v2 * v2;
      s12 += v1 * v2;
    }
    const double N = static_cast<double>(n);
    const double m1 = s1 / N, m2 = s2 / N;
    require(m2 != 0.0, "second profile integrates to zero");
    const double var1 = (s11 / N - m1 * m1) * N / (N - 1.0);
    const double var2 = (s22 / N - m2 * m2) * N / (N - 1.0);
    const double cov = (s12 / N - m1 * m2) * N / (N - 1.0);
    out.ratio_3d = m1 / m2;
    // Delta method for the ratio of paired sample means.
    const double rel_var = std::max(0.0, var1 / (m1 * m1) + var2 / (m2 * m2) - 2.0 * cov / (m1 * m2)) / N;
    out.ratio_3d_sigma = std::fabs(out.ratio_3d) * std::sqrt(rel_var);
    out.samples = n;
    if (out.ratio_3d_sigma <= options.target_rel_sigma * std::fabs(out.ratio_3d) || n * 2 > options.max_samples) break;
  }
  const double diff = std::fabs(out.ratio_3d - out.ratio_1d);
  out.agree = diff <= 3.0 * out.ratio_3d_sigma || diff <= 1e-14 * std::fabs(out.ratio_1d);
  return out;
}

}  // namespace quantfield::quantization

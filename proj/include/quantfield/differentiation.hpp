#pragma once

// Finite-difference differential operators: the Euclidean Laplacian and the
// curvature density kappa = (1/4) Laplacian_s log p.

#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "quantfield/errors.hpp"
#include "quantfield/log_value.hpp"
#include "quantfield/planck.hpp"

namespace quantfield {

using ScalarField = std::function<double(std::span<const double>)>;

// Central second-order Laplacian of f at `point`; with `richardson` the
// steps h and 2h are combined to cancel the O(h^2) term.
inline double fd_laplacian(const ScalarField& f, std::span<const double> point, double h,
                           bool richardson = false) {
  require(h > 0.0, "finite-difference step must be positive");
  std::vector<double> x(point.begin(), point.end());
  const double center = f(x);
  auto at_step = [&](double step) {
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double xi = x[i];
      x[i] = xi + step;
      const double plus = f(x);
      x[i] = xi - step;
      const double minus = f(x);
      x[i] = xi;
      sum += (plus - 2.0 * center + minus) / (step * step);
    }
    return sum;
  };
  const double fine = at_step(h);
  if (!richardson) return fine;
  return (4.0 * fine - at_step(2.0 * h)) / 3.0;
}

struct KappaOptions {
  // Step is rel_step * Im s.
  double rel_step = 1e-3;
  // 0: plain central difference; 1: one Richardson level (h, 2h);
  // 2: two levels (h, 2h, 4h).
  int richardson_levels = 2;
  // p depends on Im s only; skip the x-derivative.
  bool im_only = true;
  // Also run the full two-dimensional stencil and report both.
  bool verify_2d = false;
};

struct KappaResult {
  double kappa = 0.0;
  std::optional<double> kappa_2d;
  double step = 0.0;
};

namespace detail {

inline double second_difference_richardson(const std::function<double(double)>& g, double h,
                                           int levels) {
  const double g0 = g(0.0);
  auto d2 = [&](double step) { return (g(step) - 2.0 * g0 + g(-step)) / (step * step); };
  std::vector<double> column;
  for (int i = 0; i <= levels; ++i) column.push_back(d2(h * std::pow(2.0, i)));
  // Neville-style elimination of h^2, h^4, ... terms.
  for (int level = 1; level <= levels; ++level) {
    const double factor = std::pow(4.0, level);
    for (int i = 0; i + level <= levels; ++i)
      column[i] = (factor * column[i] - column[i + 1]) / (factor - 1.0);
  }
  return column[0];
}

}  // namespace detail

// kappa(s) = (1/4)(d^2/dx^2 + d^2/dy^2) log p at s = x + iy.
inline KappaResult kappa_from_log(const std::function<LogValue(const PlanckPoint&)>& p,
                                  const PlanckPoint& s, const KappaOptions& options = {}) {
  require(options.rel_step > 0.0, "kappa step must be positive");
  require(options.richardson_levels >= 0 && options.richardson_levels <= 3,
          "richardson_levels must be in [0, 3]");
  const double h = options.rel_step * s.im();
  require(h * std::pow(2.0, options.richardson_levels) < 0.5 * s.im(),
          "kappa stencil leaves the upper half plane");

  auto log_p = [&](double dx, double dy) {
    const PlanckPoint q = s.shifted(dx, dy);
    const LogValue v = p(q);
    if (!v.is_positive() || !std::isfinite(v.log_magnitude)) {
      std::ostringstream msg;
      msg << "kappa_from_log: p is not positive at s = " << q.re() << " + " << q.im() << "i";
      throw DomainError(msg.str());
    }
    return v.log_magnitude;
  };
  const double d_yy = detail::second_difference_richardson(
      [&](double dy) { return log_p(0.0, dy); }, h, options.richardson_levels);
  KappaResult result;
  result.step = h;
  if (options.im_only) {
    result.kappa = 0.25 * d_yy;
  } else {
    const double d_xx = detail::second_difference_richardson(
        [&](double dx) { return log_p(dx, 0.0); }, h, options.richardson_levels);
    result.kappa = 0.25 * (d_xx + d_yy);
  }
  if (options.verify_2d) {
    const double d_xx = detail::second_difference_richardson(
        [&](double dx) { return log_p(dx, 0.0); }, h, options.richardson_levels);
    result.kappa_2d = 0.25 * (d_xx + d_yy);
  }
  return result;
}

}  // namespace quantfield

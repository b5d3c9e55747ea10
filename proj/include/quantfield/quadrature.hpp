#pragma once

// One-dimensional and nested quadrature with honest error estimates.
//
// Three schemes are available: global adaptive Gauss-Kronrod (10/21 point),
// tanh-sinh with level doubling, and Gauss-Hermite for Gaussian-weighted
// integrals after a centering substitution.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quantfield/errors.hpp"
#include "quantfield/log_value.hpp"

namespace quantfield {

enum class QuadratureScheme { AdaptiveInterval, GaussHermiteShifted, TanhSinh };

inline std::string to_string(QuadratureScheme s) {
  switch (s) {
    case QuadratureScheme::AdaptiveInterval: return "adaptive-interval";
    case QuadratureScheme::GaussHermiteShifted: return "gauss-hermite-shifted";
    case QuadratureScheme::TanhSinh: return "tanh-sinh";
  }
  return "?";
}

inline QuadratureScheme parse_scheme(const std::string& name) {
  if (name == "adaptive-interval") return QuadratureScheme::AdaptiveInterval;
  if (name == "gauss-hermite-shifted") return QuadratureScheme::GaussHermiteShifted;
  if (name == "tanh-sinh") return QuadratureScheme::TanhSinh;
  throw InvalidInput("unknown quadrature scheme '" + name + "'");
}

struct QuadratureSpec {
  QuadratureScheme scheme = QuadratureScheme::AdaptiveInterval;
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  // Maximum number of subintervals (adaptive), levels (tanh-sinh) or
  // order doublings (Gauss-Hermite).
  int max_refinement = 2000;
  // Gaussian tails are cut at this many units of 1/sqrt(-a).
  double truncation_radius_sigma = 9.0;
  int hermite_order = 48;

  void validate() const {
    require(abs_tol > 0.0 && rel_tol > 0.0, "quadrature tolerances must be positive");
    require(max_refinement > 0, "max_refinement must be positive");
    require(truncation_radius_sigma >= 6.0, "truncation_radius_sigma must be at least 6");
    require(hermite_order >= 2, "hermite_order must be at least 2");
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

using RealFunction = std::function<double(double)>;

namespace detail {

// Kronrod 21-point abscissae (positive half, descending) and weights, with
// the embedded 10-point Gauss weights on the odd-indexed abscissae.
inline constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208497320460, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double lo, hi, value, error, roundoff;
  bool operator<(const Panel& other) const { return error < other.error; }
};

inline Panel kronrod21(const RealFunction& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[10];
  double gauss = 0.0;
  double abs_sum = std::fabs(kronrod);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    kronrod += kKronrodWeights[j] * (f1 + f2);
    abs_sum += kKronrodWeights[j] * (std::fabs(f1) + std::fabs(f2));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (f1 + f2);
  }
  const double value = kronrod * half;
  double error = std::fabs((kronrod - gauss) * half);
  // Roundoff floor: the rule cannot resolve below a few ulps of sum |f|.
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum * std::fabs(half);
  error = std::max(error, roundoff);
  return {lo, hi, value, error, roundoff};
}

inline QuadratureResult adaptive_finite(const RealFunction& f, double lo, double hi,
                                        const QuadratureSpec& spec) {
  std::priority_queue<Panel> heap;
  Panel first = kronrod21(f, lo, hi);
  heap.push(first);
  double total = first.value;
  double total_error = first.error;
  double total_roundoff = first.roundoff;
  int evaluations = 21;
  int panels = 1;
  // Tolerances tighter than the accumulated roundoff floor are unreachable,
  // so every panel sitting at its floor also counts as converged.
  while (total_error - total_roundoff > std::max(spec.abs_tol, spec.rel_tol * std::fabs(total))) {
    if (panels >= spec.max_refinement) {
      return {total, total_error, evaluations, false};
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) {
      // Interval exhausted at machine resolution.
      heap.push(worst);
      return {total, total_error, evaluations, false};
    }
    Panel left = kronrod21(f, worst.lo, mid);
    Panel right = kronrod21(f, mid, worst.hi);
    evaluations += 42;
    ++panels;
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    total_roundoff += left.roundoff + right.roundoff - worst.roundoff;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  double sum = 0.0, err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  return {sum, err, evaluations, true};
}

inline QuadratureResult tanh_sinh_finite(const RealFunction& f, double lo, double hi,
                                         const QuadratureSpec& spec) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double kHalfPi = 0.5 * M_PI;
  constexpr double kMaxAbscissa = 4.5;
  auto node_contribution = [&](double u) {
    const double v = kHalfPi * std::sinh(u);
    const double cv = std::cosh(v);
    const double weight = half * kHalfPi * std::cosh(u) / (cv * cv);
    // Distance from the nearer endpoint, computed without cancellation.
    const double gap = half * 2.0 / (std::exp(2.0 * std::fabs(v)) + 1.0);
    if (gap == 0.0 || weight == 0.0) return 0.0;
    const double x = v > 0 ? hi - gap : (v < 0 ? lo + gap : center);
    if (x <= lo || x >= hi) return 0.0;
    return weight * f(x);
  };
  double h = 1.0;
  double sum = node_contribution(0.0);
  int evaluations = 1;
  for (int j = 1; j * h <= kMaxAbscissa; ++j) {
    sum += node_contribution(j * h) + node_contribution(-j * h);
    evaluations += 2;
  }
  double estimate = sum * h;
  double error = std::fabs(estimate);
  for (int level = 1; level <= std::min(spec.max_refinement, 12); ++level) {
    h *= 0.5;
    double fresh = 0.0;
    for (int j = 1; j * h <= kMaxAbscissa; j += 2) {
      fresh += node_contribution(j * h) + node_contribution(-j * h);
      evaluations += 2;
    }
    sum += fresh;
    const double next = sum * h;
    error = std::fabs(next - estimate);
    estimate = next;
    if (level >= 3 && error <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(estimate)))
      return {estimate, error, evaluations, true};
  }
  return {estimate, error, evaluations, false};
}

}  // namespace detail

// Gauss-Hermite nodes and weights for weight exp(-x^2), via the
// Golub-Welsch eigenvalue method. Results are cached per order.
struct HermiteRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline const HermiteRule& gauss_hermite_rule(int order) {
  static std::mutex mutex;
  static std::map<int, HermiteRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  require(order >= 1 && order <= 400, "Gauss-Hermite order out of range");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int i = 1; i < order; ++i) {
    const double b = std::sqrt(0.5 * i);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  HermiteRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const double mu0 = std::sqrt(M_PI);
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v = solver.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v * v;
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

// Integrates f over [lo, hi]; either bound may be infinite.
//
// Infinite ranges are mapped onto finite ones (x = t/(1-t^2) for the real
// line, x = lo + t/(1-t) for a half line). The Gauss-Hermite scheme only
// accepts the whole real line and integrates f(x) = e^{-x^2} (e^{x^2} f(x)),
// doubling the order until two orders agree.
inline QuadratureResult integrate_1d(const RealFunction& f, double lo, double hi,
                                     const QuadratureSpec& spec = {}) {
  spec.validate();
  require(!(std::isnan(lo) || std::isnan(hi)), "integration bounds must not be NaN");
  if (lo == hi) return {0.0, 0.0, 0, true};
  if (lo > hi) {
    auto r = integrate_1d(f, hi, lo, spec);
    r.value = -r.value;
    return r;
  }
  const bool lo_inf = std::isinf(lo), hi_inf = std::isinf(hi);

  if (spec.scheme == QuadratureScheme::GaussHermiteShifted) {
    require(lo_inf && hi_inf, "the Gauss-Hermite scheme integrates over the whole real line");
    auto sum_at = [&](int order) {
      const auto& rule = gauss_hermite_rule(order);
      double s = 0.0;
      for (int i = 0; i < order; ++i) {
        const double x = rule.nodes[i];
        s += rule.weights[i] * std::exp(x * x) * f(x);
      }
      return s;
    };
    int order = spec.hermite_order;
    double previous = sum_at(order);
    int evaluations = order;
    for (int round = 0; round < std::min(spec.max_refinement, 3); ++round) {
      const int next_order = std::min(2 * order, 400);
      const double next = sum_at(next_order);
      evaluations += next_order;
      const double err = std::fabs(next - previous);
      if (err <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(next)))
        return {next, err, evaluations, true};
      if (next_order == order) return {next, err, evaluations, false};
      previous = next;
      order = next_order;
    }
    return {previous, std::fabs(previous), evaluations, false};
  }

  RealFunction mapped = f;
  double a = lo, b = hi;
  if (lo_inf && hi_inf) {
    mapped = [&f](double t) {
      const double d = 1.0 - t * t;
      if (d <= 0.0) return 0.0;
      const double x = t / d;
      const double v = f(x);
      return v == 0.0 ? 0.0 : v * (1.0 + t * t) / (d * d);
    };
    a = -1.0;
    b = 1.0;
  } else if (hi_inf) {
    mapped = [&f, lo](double t) {
      const double d = 1.0 - t;
      if (d <= 0.0) return 0.0;
      const double v = f(lo + t / d);
      return v == 0.0 ? 0.0 : v / (d * d);
    };
    a = 0.0;
    b = 1.0;
  } else if (lo_inf) {
    mapped = [&f, hi](double t) {
      const double d = 1.0 - t;
      if (d <= 0.0) return 0.0;
      const double v = f(hi - t / d);
      return v == 0.0 ? 0.0 : v / (d * d);
    };
    a = 0.0;
    b = 1.0;
  }
  if (spec.scheme == QuadratureScheme::TanhSinh) return detail::tanh_sinh_finite(mapped, a, b, spec);
  return detail::adaptive_finite(mapped, a, b, spec);
}

// Nested integration over an axis-aligned box, dimension <= 4.
inline QuadratureResult integrate_box(const std::function<double(std::span<const double>)>& f,
                                      std::span<const double> lower, std::span<const double> upper,
                                      const QuadratureSpec& spec = {}) {
  require(lower.size() == upper.size(), "box bounds have mismatched dimensions");
  require(!lower.empty() && lower.size() <= 4, "box integration supports 1 to 4 dimensions");
  const std::size_t n = lower.size();
  std::vector<double> point(n, 0.0);
  QuadratureResult total{0.0, 0.0, 0, true};

  std::function<double(std::size_t)> level = [&](std::size_t axis) -> double {
    RealFunction slice = [&, axis](double x) {
      point[axis] = x;
      if (axis + 1 == n) {
        ++total.evaluations;
        return f(std::span<const double>(point));
      }
      return level(axis + 1);
    };
    const auto r = integrate_1d(slice, lower[axis], upper[axis], spec);
    if (!r.converged) total.converged = false;
    if (axis == 0) total.error += r.error;
    return r.value;
  };
  total.value = level(0);
  return total;
}

// ∫ exp(a t^2 + 2 mu t) g(t) dt over the real line, a < 0, in log form.
//
// Uses the centering substitution t = theta/sqrt(-a) - mu/a, under which the
// exponent becomes -theta^2 - mu^2/a. With the Gauss-Hermite scheme the result
// is exact for polynomial g of degree < 2 * hermite_order.
inline LogValue gaussian_weighted(const std::function<LogValue(double)>& g, double a, double mu,
                                  const QuadratureSpec& spec = {QuadratureScheme::GaussHermiteShifted},
                                  double* error_estimate = nullptr) {
  require(a < 0.0, "gaussian_weighted requires a < 0");
  spec.validate();
  const double scale = 1.0 / std::sqrt(-a);
  const double center = -mu / a;
  const double prefactor = -mu * mu / a + std::log(scale);
  auto t_of = [&](double theta) { return theta * scale + center; };

  if (spec.scheme == QuadratureScheme::GaussHermiteShifted) {
    const auto& rule = gauss_hermite_rule(spec.hermite_order);
    std::vector<LogValue> terms;
    terms.reserve(rule.nodes.size());
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      terms.push_back(g(t_of(rule.nodes[i])).scaled_by_exp(std::log(rule.weights[i])));
    if (error_estimate) *error_estimate = 0.0;
    return signed_log_sum(terms).scaled_by_exp(prefactor);
  }

  // Direct quadrature on the truncated centered range, with g shifted by its
  // magnitude at the center.
  const LogValue reference = g(center);
  const double shift = reference.is_zero() ? 0.0 : reference.log_magnitude;
  RealFunction integrand = [&](double theta) {
    const LogValue v = g(t_of(theta));
    if (v.is_zero()) return 0.0;
    return v.sign * std::exp(v.log_magnitude - shift - theta * theta);
  };
  const double radius = spec.truncation_radius_sigma;
  const auto r = integrate_1d(integrand, -radius, radius, spec);
  if (!r.converged) throw NumericalFailure("gaussian_weighted: quadrature did not converge");
  if (error_estimate) *error_estimate = r.error;
  return LogValue::from_value(r.value).scaled_by_exp(prefactor + shift);
}

}  // namespace quantfield

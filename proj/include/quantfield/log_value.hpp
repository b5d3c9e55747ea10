#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

namespace quantfield {

// A real number stored as sign * exp(log_magnitude).
// Zero is represented by sign 0 and log_magnitude = -inf.
struct LogValue {
  double log_magnitude = -std::numeric_limits<double>::infinity();
  int sign = 0;

  static LogValue zero() { return {}; }

  static LogValue from_log(double log_magnitude, int sign = 1) {
    if (sign == 0 || log_magnitude == -std::numeric_limits<double>::infinity()) return zero();
    return {log_magnitude, sign > 0 ? 1 : -1};
  }

  static LogValue from_value(double x) {
    if (x == 0.0) return zero();
    return {std::log(std::fabs(x)), x > 0 ? 1 : -1};
  }

  bool is_zero() const { return sign == 0; }
  bool is_positive() const { return sign > 0; }

  double value() const {
    if (sign == 0) return 0.0;
    return sign * std::exp(log_magnitude);
  }

  LogValue operator-() const { return {log_magnitude, -sign}; }

  friend LogValue operator*(const LogValue& x, const LogValue& y) {
    if (x.sign == 0 || y.sign == 0) return zero();
    return {x.log_magnitude + y.log_magnitude, x.sign * y.sign};
  }

  friend LogValue operator/(const LogValue& x, const LogValue& y) {
    if (x.sign == 0) return zero();
    return {x.log_magnitude - y.log_magnitude, x.sign * y.sign};
  }

  // Multiply by exp(shift).
  LogValue scaled_by_exp(double shift) const {
    if (sign == 0) return zero();
    return {log_magnitude + shift, sign};
  }
};

// log(sum_i exp(args[i])), shifted by the maximum argument.
inline double log_sum_exp(std::span<const double> args) {
  if (args.empty()) return -std::numeric_limits<double>::infinity();
  const double top = *std::max_element(args.begin(), args.end());
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double a : args) sum += std::exp(a - top);
  return top + std::log(sum);
}

// Signed sum of log-represented terms. Positive and negative parts are
// accumulated separately, both relative to the largest magnitude.
inline LogValue signed_log_sum(std::span<const LogValue> terms) {
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& t : terms)
    if (t.sign != 0) top = std::max(top, t.log_magnitude);
  if (top == -std::numeric_limits<double>::infinity()) return LogValue::zero();
  double pos = 0.0, neg = 0.0;
  for (const auto& t : terms) {
    if (t.sign > 0) pos += std::exp(t.log_magnitude - top);
    else if (t.sign < 0) neg += std::exp(t.log_magnitude - top);
  }
  const double diff = pos - neg;
  if (diff == 0.0) return LogValue::zero();
  return LogValue::from_log(top + std::log(std::fabs(diff)), diff > 0 ? 1 : -1);
}

inline LogValue operator+(const LogValue& x, const LogValue& y) {
  const LogValue terms[2] = {x, y};
  return signed_log_sum(terms);
}

// log|sinh x|, accurate for large |x| where sinh overflows.
inline double log_abs_sinh(double x) {
  const double ax = std::fabs(x);
  if (ax == 0.0) return -std::numeric_limits<double>::infinity();
  if (ax > 20.0) return ax - std::log(2.0) + std::log1p(-std::exp(-2.0 * ax));
  return std::log(std::sinh(ax));
}

inline LogValue log_sinh(double x) {
  if (x == 0.0) return LogValue::zero();
  return LogValue::from_log(log_abs_sinh(x), x > 0 ? 1 : -1);
}

}  // namespace quantfield

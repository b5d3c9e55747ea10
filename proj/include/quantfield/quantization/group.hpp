#pragma once

// p(s) for compact groups, reduced to the maximal torus t:
//   corrected: |W| 2^{|R+|} e^b  int_t e^{a|tau|^2 + 2 lambda(tau)} prod_{R+} alpha(tau) dtau
//   bare:      |W| 2^{|R+|} e^b  int_t e^{a|tau|^2 + 2 lambda(tau)} prod_{R+} alpha^2 / sinh alpha dtau
// with lambda the shifted weight.

#include <cmath>
#include <sstream>
#include <vector>

#include "quantfield/lie/root_system.hpp"
#include "quantfield/log_value.hpp"
#include "quantfield/quadrature.hpp"
#include "quantfield/quantization/weights.hpp"

namespace quantfield::quantization {

inline QuadratureSpec group_quadrature_defaults() {
  QuadratureSpec spec;
  spec.scheme = QuadratureScheme::GaussHermiteShifted;
  spec.hermite_order = 8;
  spec.rel_tol = 1e-12;
  spec.max_refinement = 6;
  return spec;
}

namespace detail {

inline double log_weyl_prefactor(const lie::RootSystem& rs) {
  return std::log(static_cast<double>(rs.weyl.size())) + rs.num_positive_roots() * std::log(2.0);
}

// Integrand factor besides the Gaussian and e^{2 lambda}.
inline LogValue root_factor(const lie::RootSystem& rs, const lie::Vector& tau, bool corrected) {
  double log_mag = 0.0;
  int sign = 1;
  for (const auto& alpha : rs.positive_roots) {
    const double v = alpha.dot(tau);
    if (v == 0.0) return LogValue::zero();
    if (v < 0.0) sign = -sign;
    log_mag += corrected ? std::log(std::fabs(v)) : 2.0 * std::log(std::fabs(v)) - log_abs_sinh(v);
  }
  return LogValue::from_log(log_mag, sign);
}

// Tensor Gauss-Hermite sum of e^{-|theta|^2} h(theta), h given in log form.
inline LogValue tensor_hermite(int rank, int order, const std::function<LogValue(const lie::Vector&)>& h) {
  const auto& rule = gauss_hermite_rule(order);
  const int n = static_cast<int>(rule.nodes.size());
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  std::vector<LogValue> terms;
  lie::Vector theta(rank);
  while (true) {
    double log_w = 0.0;
    for (int i = 0; i < rank; ++i) {
      theta(i) = rule.nodes[idx[i]];
      log_w += std::log(rule.weights[idx[i]]);
    }
    const LogValue v = h(theta);
    if (!v.is_zero()) terms.push_back(v.scaled_by_exp(log_w));
    int i = 0;
    while (i < rank && ++idx[i] == n) idx[i++] = 0;
    if (i == rank) break;
  }
  return signed_log_sum(terms);
}

}  // namespace detail

namespace detail {

// Form whose dual is the Gaussian centre divided by y: lambda (corrected) or
// lambda - rho (bare, where 1/prod sinh alpha ~ e^{-2 rho} in the chamber).
inline lie::Vector center_form(const lie::RootSystem& rs, const lie::ShiftedWeight& lambda, bool corrected) {
  return corrected ? lambda.coefficients : lie::Vector(lambda.coefficients - rs.rho());
}

}  // namespace detail

// Exact coefficient of Im s in the part of log p that is linear in Im s:
// 2 <lambda, c> - |c|^2 with c the centre form.
inline double group_log_slope(const lie::RootSystem& rs, const lie::ShiftedWeight& lambda, bool corrected) {
  const lie::Vector c = detail::center_form(rs, lambda, corrected);
  const lie::Vector c_dual = rs.dual(c);
  return 2.0 * lambda.coefficients.dot(c_dual) - c.dot(c_dual);
}

// Quadrature path, returned as log p - baseline_slope * Im s. With
// tau = y c* + sqrt(y) M theta (M^T G M = I) the Gaussian becomes e^{-|theta|^2}
// times e^{2 sqrt(y) (lambda - c)(M theta)} and the y-linear constant is
// split off exactly. Gauss-Hermite orders are doubled until two consecutive
// orders agree to spec.rel_tol.
inline LogValue p_group_quadrature(const PlanckPoint& s, const lie::RootSystem& rs, const lie::ShiftedWeight& lambda,
                                   bool corrected, const QuadratureSpec& spec = group_quadrature_defaults(),
                                   double* rel_error = nullptr, double baseline_slope = 0.0) {
  spec.validate();
  require(lambda.coefficients.size() == rs.rank, "weight has wrong number of coordinates");
  require(rs.rank <= 3, "group quadrature supports rank <= 3");
  require(spec.scheme == QuadratureScheme::GaussHermiteShifted,
          "group quadrature uses the gauss-hermite scheme");
  const auto w = weight_params(s, rs.manifold_dim, corrected);
  const double y = s.im();
  const double root_y = std::sqrt(y);
  const lie::Vector c = detail::center_form(rs, lambda, corrected);
  const lie::Vector center = y * rs.dual(c);
  Eigen::LLT<lie::Matrix> llt(rs.inner_product);
  const lie::Matrix whiten = llt.matrixU().solve(lie::Matrix::Identity(rs.rank, rs.rank));
  const lie::Vector tilt = 2.0 * root_y * (whiten.transpose() * (lambda.coefficients - c));
  auto h = [&](const lie::Vector& theta) {
    const lie::Vector tau = center + root_y * (whiten * theta);
    return detail::root_factor(rs, tau, corrected).scaled_by_exp(tilt.dot(theta));
  };
  int order = spec.hermite_order;
  LogValue previous = detail::tensor_hermite(rs.rank, order, h);
  double diff = 0.0;
  bool converged = false;
  for (int level = 0; level < spec.max_refinement && order * 2 <= 400; ++level) {
    order *= 2;
    const LogValue next = detail::tensor_hermite(rs.rank, order, h);
    diff = (next.is_zero() || previous.is_zero()) ? 1.0 : std::fabs(std::expm1(next.log_magnitude - previous.log_magnitude));
    previous = next;
    if (diff <= spec.rel_tol) {
      converged = true;
      break;
    }
  }
  if (rel_error) *rel_error = diff;
  if (!converged || !previous.is_positive()) {
    std::ostringstream msg;
    msg << "group quadrature did not converge for " << rs.name << ", weight " << lambda.source_label
        << (corrected ? " (corrected)" : " (bare)") << " at Im s = " << y << ": relative change " << diff;
    throw NumericalFailure(msg.str());
  }
  const double log_jacobian = 0.5 * rs.rank * std::log(y) + std::log(std::fabs(whiten.determinant()));
  const double linear = (group_log_slope(rs, lambda, corrected) - baseline_slope) * y;
  return previous.scaled_by_exp(detail::log_weyl_prefactor(rs) + w.b + log_jacobian + linear);
}

// True when the closed form below applies.
inline bool has_group_closed_form(const lie::RootSystem& rs, bool corrected) {
  return corrected || rs.positive_roots.empty();
}

// Exact value of the quadrature above, by the Gaussian mean-value property
// of the harmonic polynomial prod alpha:
//   |W| 2^{|R+|} e^b (pi y)^{r/2} det(G)^{-1/2} y^{|R+|} prod alpha(lambda*) e^{|lambda*|^2 y}.
// In the corrected case the powers of y cancel since m = r + 2|R+|.
inline LogValue p_group_closed(const PlanckPoint& s, const lie::RootSystem& rs, const lie::ShiftedWeight& lambda,
                               bool corrected = true, double baseline_slope = 0.0) {
  require(has_group_closed_form(rs, corrected), "closed form needs the corrected weight or a torus");
  require(lambda.coefficients.size() == rs.rank, "weight has wrong number of coordinates");
  const auto w = weight_params(s, rs.manifold_dim, corrected);
  const double y = s.im();
  const lie::Vector dual = rs.dual(lambda.coefficients);
  const double roots = lie::root_product(rs, dual);
  require(roots > 0.0, "shifted weight must be regular dominant");
  const double log_p = detail::log_weyl_prefactor(rs) + w.b + 0.5 * rs.rank * std::log(M_PI * y) -
                       0.5 * std::log(rs.inner_product.determinant()) + rs.num_positive_roots() * std::log(y) +
                       std::log(roots) + (lie::dual_norm_sq(rs, lambda) - baseline_slope) * y;
  return LogValue::from_log(log_p);
}

// Bare SU(2), summed over the weights k - 2j of the spin-k/2 representation:
//   y^{-3/2} sum_j e^{(k-2j)^2 y} (1 + 2 (k-2j)^2 y).
inline LogValue p_su2_closed(const PlanckPoint& s, int k, double baseline_slope = 0.0) {
  require(k >= 0, "k must be non-negative");
  const double y = s.im();
  std::vector<double> terms;
  for (int j = 0; j <= k; ++j) {
    const double n2 = static_cast<double>((k - 2 * j) * (k - 2 * j));
    terms.push_back((n2 - baseline_slope) * y + std::log1p(2.0 * n2 * y));
  }
  return LogValue::from_log(log_sum_exp(terms) - 1.5 * std::log(y));
}

}  // namespace quantfield::quantization

#pragma once

// Cross-module verification: the acceptance criteria and the property
// checks, each reported as one row with the measured residual.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "quantfield/hilbert/transport.hpp"
#include "quantfield/lie/adjoint.hpp"
#include "quantfield/lie/presets.hpp"
#include "quantfield/quantization/model.hpp"
#include "quantfield/quantization/reduction.hpp"
#include "quantfield/toeplitz/model.hpp"

namespace quantfield::verify {

struct CheckResult {
  std::string id;
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string detail;
};

namespace detail {

using Check = std::function<CheckResult()>;

// Runs a check; exceptions become failed rows carrying the message.
inline CheckResult guarded(const std::string& id, const std::string& name, const Check& check) {
  try {
    CheckResult r = check();
    r.id = id;
    r.name = name;
    return r;
  } catch (const std::exception& e) {
    return {id, name, NAN, NAN, false, std::string("error: ") + e.what()};
  }
}

inline CheckResult within(double measured, double tol, std::string detail = {}) {
  return {{}, {}, measured, tol, std::isfinite(measured) && measured <= tol, std::move(detail)};
}

inline std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

inline hilbert::Point pt(double x, double y) {
  hilbert::Point p(2);
  p << x, y;
  return p;
}

// A(d_x) = i (y^2 + x y), A(d_y) = i sin x on [-2, 2]^2; curvature i (cos x - 2y - x).
inline hilbert::ConnectionField wavy_abelian() {
  hilbert::ConnectionField cf;
  cf.lower = pt(-2.0, -2.0);
  cf.upper = pt(2.0, 2.0);
  cf.fiber_dim = 1;
  cf.form = [](const hilbert::Point& p) {
    const hilbert::Complex i(0.0, 1.0);
    return std::vector<hilbert::Matrix>{hilbert::Matrix::Constant(1, 1, i * (p(1) * p(1) + p(0) * p(1))),
                                        hilbert::Matrix::Constant(1, 1, i * std::sin(p(0)))};
  };
  return cf;
}

inline lie::Vector random_point(int rank, std::mt19937_64& rng, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  lie::Vector tau(rank);
  for (int i = 0; i < rank; ++i) tau(i) = u(rng);
  return tau;
}

inline double kappa_at(const quantization::ModelSpec& model, int k, double y) {
  return quantization::curvature(model, k, PlanckPoint::on_axis(y)).kappa;
}

}  // namespace detail

// ---- acceptance criteria ----

inline CheckResult criterion_group_flatness() {
  const auto model = quantization::parse_model("group:su2", true);
  double worst_kappa = 0.0, worst_gap = 0.0;
  for (int k = 0; k <= 8; ++k)
    for (double y : {0.5, 1.0, 2.0}) {
      const auto c = quantization::curvature(model, k, PlanckPoint::on_axis(y));
      worst_kappa = std::max({worst_kappa, std::fabs(c.kappa), std::fabs(c.kappa_closed.value())});
      worst_gap = std::max(worst_gap, std::fabs(c.kappa - *c.kappa_closed));
    }
  auto r = detail::within(worst_kappa, 1e-6, "max |kappa - kappa_closed| = " + detail::fmt(worst_gap) + " (tol 1e-7)");
  r.passed = r.passed && worst_gap <= 1e-7;
  return r;
}

inline CheckResult criterion_su2_bare() {
  const auto model = quantization::parse_model("group:su2", false);
  const double k0 = detail::kappa_at(model, 0, 1.0);
  const double k1 = detail::kappa_at(model, 1, 1.0);
  const auto report = quantization::flatness_classify(model, {0, 1}, {1.0});
  const double gap = report.witness ? report.witness->gap : 0.0;
  const double e0 = std::fabs(k0 - 0.375), e1 = std::fabs(k1 - 0.263889), eg = std::fabs(gap - 1.0 / 9.0);
  CheckResult r = detail::within(std::max(e0, e1 / 10.0), 1e-6,
                                 "kappa(0) = " + detail::fmt(k0) + ", kappa(1) = " + detail::fmt(k1) +
                                     ", witness gap = " + detail::fmt(gap) + ", verdict " +
                                     quantization::to_string(report.verdict));
  r.passed = e0 <= 1e-6 && e1 <= 1e-5 && eg <= 1e-5 &&
             report.verdict == quantization::Verdict::NotProjectivelyFlat;
  return r;
}

inline CheckResult criterion_torus_projective() {
  double worst = 0.0, spread = 0.0;
  for (int m = 1; m <= 3; ++m) {
    const auto model = quantization::torus_model(m, false);
    for (double y : {0.5, 1.0, 2.0}) {
      double lo = INFINITY, hi = -INFINITY;
      for (int k : {0, 1, 2, 5}) {
        const double kappa = detail::kappa_at(model, k, y);
        worst = std::max(worst, std::fabs(kappa - m / (8.0 * y * y)));
        lo = std::min(lo, kappa);
        hi = std::max(hi, kappa);
      }
      spread = std::max(spread, hi - lo);
    }
  }
  auto r = detail::within(worst, 1e-6, "max spread over k = " + detail::fmt(spread) + " (tol 1e-8)");
  r.passed = r.passed && spread <= 1e-8;
  return r;
}

inline CheckResult criterion_sphere_asymptotics() {
  const auto s2 = quantization::sphere_model(2);
  auto ratio_error = [&](int k) {
    return std::fabs(detail::kappa_at(s2, k, 1.0) / (-1.0 / (8.0 * (2.0 * k + 1) * (2.0 * k + 1))) - 1.0);
  };
  const double e10 = ratio_error(10), e20 = ratio_error(20);
  const auto s3 = quantization::sphere_model(3);
  double flat = 0.0;
  for (int k : {2, 5, 10}) flat = std::max(flat, std::fabs(detail::kappa_at(s3, k, 1.0)));
  CheckResult r = detail::within(e20, 0.08,
                                 "m=2 ratio error k=10: " + detail::fmt(e10) + ", k=20: " + detail::fmt(e20) +
                                     ", shrink " + detail::fmt(e10 / e20) + "x; m=3 max |kappa| " + detail::fmt(flat));
  r.passed = e10 <= 0.25 && e20 <= 0.08 && e10 / e20 >= 3.0 && flat <= 1e-5;
  return r;
}

inline CheckResult criterion_toeplitz_lemma() {
  double worst = 0.0;
  for (double a : {-1.0, -1.5, -2.0})
    for (double t : {-0.6, -1.2, -1.9})
      for (int k = 0; k <= 5; ++k)
        for (int n = 0; n <= 3; ++n)
          worst = std::max(worst, toeplitz::verify_lemma({k, t}, n, PlanckPoint::on_axis(-1.0 / a)).residual);
  return detail::within(worst, 1e-5, "a in {-1,-1.5,-2}, t in {-0.6,-1.2,-1.9}, k <= 5, n <= 3");
}

inline CheckResult criterion_truncated_circle() {
  const auto s = PlanckPoint::on_axis(1.0);
  std::ostringstream detail_text;
  double final_error = 0.0;
  bool monotone = true;
  for (bool corrected : {false, true}) {
    const auto model = quantization::circle_model(1.0, corrected);
    const double limit = quantization::truncated_circle_kappa_limit(1.0, s, corrected);
    double previous = INFINITY;
    detail_text << (corrected ? "; corrected" : "bare");
    for (int k : {20, 40, 80}) {
      const double scaled = k * (quantization::curvature(model, k, s).kappa - limit);
      const double error = std::fabs(scaled - 0.5);
      detail_text << " " << detail::fmt(scaled);
      monotone = monotone && error < previous;
      previous = error;
    }
    final_error = std::max(final_error, previous / 0.5);
  }
  auto r = detail::within(final_error, 0.05, detail_text.str());
  r.passed = r.passed && monotone;
  return r;
}

inline CheckResult criterion_weyl_machinery(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double denominator = 0.0;
  for (const auto& rs : {lie::su2(), lie::su3()})
    for (int trial = 0; trial < 100; ++trial) {
      const auto d = lie::weyl_denominator(rs, detail::random_point(rs.rank, rng, 3.0));
      denominator = std::max(denominator, d.product_side.sign != d.sum_side.sign
                                              ? INFINITY
                                              : std::fabs(std::expm1(d.product_side.log_magnitude -
                                                                     d.sum_side.log_magnitude)));
    }
  const auto su3 = lie::su3();
  double laplacian = 0.0;
  auto f = [&](std::span<const double> x) { return lie::root_product(su3, lie::Vector{{x[0], x[1]}}); };
  for (int trial = 0; trial < 50; ++trial) {
    const auto tau = detail::random_point(2, rng, 2.0);
    const std::vector<double> x = {tau(0), tau(1)};
    const double scale = std::max(1.0, std::fabs(f(x)) / std::max(1e-3, tau.norm()));
    laplacian = std::max(laplacian, std::fabs(fd_laplacian(f, x, 1e-3, true)) / scale);
  }
  auto g1 = [](double r) { return std::exp(-r * r); };
  auto g2 = [](double r) { return std::exp(-2.0 * r * r); };
  auto g3 = [](double r) { return r * r * std::exp(-r * r); };
  const auto scale = quantization::weyl_reduction_check(g1, g2, seed);
  const auto moment = quantization::weyl_reduction_check(g3, g1, seed + 1);
  CheckResult r = detail::within(denominator, 1e-10,
                                 "FD Laplacian " + detail::fmt(laplacian) + " (tol 1e-6); reduction " +
                                     detail::fmt(scale.ratio_3d) + "+-" + detail::fmt(scale.ratio_3d_sigma) + " vs " +
                                     detail::fmt(scale.ratio_1d) + ", " + detail::fmt(moment.ratio_3d) + "+-" +
                                     detail::fmt(moment.ratio_3d_sigma) + " vs " + detail::fmt(moment.ratio_1d));
  r.passed = r.passed && laplacian <= 1e-6 && scale.agree && moment.agree;
  return r;
}

inline CheckResult criterion_spherical_functions() {
  double worst = 0.0;
  for (int k = 0; k <= 10; ++k)
    for (int i = 0; i <= 20; ++i) {
      const double t = 0.1 * i;
      // Legendre three-term recurrence at cosh 2t.
      const double x = std::cosh(2.0 * t);
      double p0 = 1.0, p1 = x;
      for (int n = 1; n < k; ++n) {
        const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
        p0 = p1;
        p1 = p2;
      }
      const double legendre = k == 0 ? 1.0 : p1;
      const double phi = quantization::spherical_phi(k, 2, t).value();
      worst = std::max(worst, std::fabs(phi / (M_PI * legendre) - 1.0));
    }
  return detail::within(worst, 1e-8, "m = 2, k <= 10, t in [0, 2]");
}

inline CheckResult criterion_transport(std::uint64_t seed) {
  using namespace hilbert;
  std::mt19937_64 rng(seed);
  const auto flat = examples::pure_gauge(examples::i_pauli(0), examples::i_pauli(1));
  std::uniform_real_distribution<double> corner(-1.4, 0.0), side(0.1, 1.4);
  double loops = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double x0 = corner(rng), y0 = corner(rng);
    const Matrix f = transport_or_throw(flat, rectangle_loop(x0, y0, x0 + side(rng), y0 + side(rng)));
    loops = std::max(loops, (f - Matrix::Identity(2, 2)).norm());
  }
  const auto wavy = detail::wavy_abelian();
  std::uniform_real_distribution<double> c2(-1.8, 0.2), s2(0.2, 1.4);
  double stokes = 0.0;
  for (int trial = 0; trial < 8; ++trial) {
    const double x0 = c2(rng), y0 = c2(rng), x1 = x0 + s2(rng), y1 = y0 + s2(rng);
    const Complex loop = transport_or_throw(wavy, rectangle_loop(x0, y0, x1, y1))(0, 0);
    // Flux of cos x - 2y - x over the rectangle.
    const double flux = (std::sin(x1) - std::sin(x0)) * (y1 - y0) - (y1 * y1 - y0 * y0) * (x1 - x0) -
                        0.5 * (x1 * x1 - x0 * x0) * (y1 - y0);
    stokes = std::max(stokes, std::fabs(std::remainder(std::arg(loop) + flux, 2.0 * M_PI)));
  }
  const auto triv = trivialize(flat, detail::pt(-0.2, 0.3), {{4, 4}});
  const auto central = examples::linear_potential(Eigen::Vector2d(1.0, 1.0));
  const Complex i(0.0, 1.0);
  const auto twisted =
      twist_to_flat(central, [i](const Point& p) { return std::vector<Complex>{-i * p(1), 0.0}; }, {{4, 4}});
  const auto twisted_triv = trivialize(twisted, detail::pt(0.1, 0.1), {{4, 4}});
  CheckResult r = detail::within(loops, 1e-8,
                                 "Stokes " + detail::fmt(stokes) + " (tol 1e-6); path independence " +
                                     detail::fmt(triv.path_independence) + " (tol 1e-8); twisted " +
                                     detail::fmt(twisted_triv.path_independence));
  r.passed = r.passed && stokes <= 1e-6 && triv.path_independence <= 1e-8 && twisted_triv.path_independence <= 1e-8;
  return r;
}

inline CheckResult criterion_cross_module() {
  double circle = 0.0;
  for (bool corrected : {false, true}) {
    const auto torus = quantization::torus_model(1, corrected);
    for (int k : {0, 2, 5})
      for (double y : {0.5, 1.0, 2.0})
        circle = std::max(circle, std::fabs(toeplitz::toeplitz_curvature({k, -0.4, corrected}, PlanckPoint::on_axis(y)).kappa -
                                             detail::kappa_at(torus, k, y)));
  }
  double flat = 0.0;
  const auto s3 = quantization::sphere_model(3);
  const auto su2 = quantization::parse_model("group:su2", true);
  for (int k : {2, 5, 10})
    flat = std::max({flat, std::fabs(detail::kappa_at(s3, k, 1.0)), std::fabs(detail::kappa_at(su2, k, 1.0))});
  auto r = detail::within(circle, 1e-6, "sphere:3 / su2 corrected max |kappa| " + detail::fmt(flat) + " (tol 1e-5)");
  r.passed = r.passed && flat <= 1e-5;
  return r;
}

inline std::vector<CheckResult> acceptance_suite(std::uint64_t seed = 1) {
  using detail::guarded;
  return {
      guarded("1", "su(2) corrected is flat", criterion_group_flatness),
      guarded("2", "su(2) bare is not projectively flat", criterion_su2_bare),
      guarded("3", "bare torus is projectively flat", criterion_torus_projective),
      guarded("4", "sphere curvature asymptotics", criterion_sphere_asymptotics),
      guarded("5", "Toeplitz derivative identity", criterion_toeplitz_lemma),
      guarded("6", "truncated circle slope", criterion_truncated_circle),
      guarded("7", "Weyl denominator, harmonicity, reduction", [seed] { return criterion_weyl_machinery(seed); }),
      guarded("8", "spherical functions vs Legendre", criterion_spherical_functions),
      guarded("9", "transport, Stokes, trivialization, twist", [seed] { return criterion_transport(seed); }),
      guarded("10", "cross-module consistency", criterion_cross_module),
  };
}

// ---- module invariants ----

inline std::vector<CheckResult> invariant_suite(std::uint64_t seed = 1) {
  using detail::guarded;
  std::vector<CheckResult> out;

  out.push_back(guarded("lie.alternating", "root product is W-alternating", [seed] {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (const auto& rs : {lie::su2(), lie::su3()})
      for (int trial = 0; trial < 20; ++trial) {
        const auto tau = detail::random_point(rs.rank, rng, 2.0);
        for (const auto& w : rs.weyl)
          worst = std::max(worst, std::fabs(lie::root_product(rs, w.matrix * tau) - w.det * lie::root_product(rs, tau)));
      }
    return detail::within(worst, 1e-12);
  }));

  out.push_back(guarded("lie.half-form-group", "matrix and root half-form densities agree", [seed] {
    std::mt19937_64 rng(seed + 2);
    double worst = 0.0;
    for (const auto& [rs, adj] : {std::pair{lie::su2(), lie::su2_algebra()}, std::pair{lie::su3(), lie::su3_algebra()}})
      for (int trial = 0; trial < 10; ++trial) {
        const auto tau = detail::random_point(rs.rank, rng, 1.5);
        const double matrix_path = lie::half_form_density_group(adj, adj.torus_embedding * tau).value;
        worst = std::max(worst, std::fabs(matrix_path / lie::half_form_density_torus(rs, tau) - 1.0));
      }
    return detail::within(worst, 1e-10);
  }));

  out.push_back(guarded("lie.half-form-sphere", "sphere density over (sinh 2t / t)^{m-1} is constant", [] {
    double worst = 0.0;
    for (int m = 2; m <= 5; ++m) {
      const auto adj = lie::sphere_pair(m);
      double first = 0.0;
      for (int i = 0; i <= 29; ++i) {
        const double t = 0.1 + i * 0.1;
        const double ratio = lie::half_form_density_sphere(adj, t, m).value / std::pow(std::sinh(2 * t) / t, m - 1);
        if (i == 0) first = ratio;
        worst = std::max(worst, std::fabs(ratio / first - 1.0));
      }
    }
    return detail::within(worst, 1e-8);
  }));

  out.push_back(guarded("lie.characters", "su(2) characters equal weight sums", [seed] {
    std::mt19937_64 rng(seed + 3);
    std::uniform_real_distribution<double> u(0.05, 2.0);
    const auto rs = lie::su2();
    double worst = 0.0;
    for (int k = 0; k <= 6; ++k)
      for (int trial = 0; trial < 20; ++trial) {
        const double t = u(rng);
        double sum = 0.0;
        for (int j = 0; j <= k; ++j) sum += std::exp(2.0 * (k - 2 * j) * t);
        const double chi = lie::character_at(rs, lie::indexed_weight(rs, k), lie::Vector::Constant(1, t)).value.value();
        worst = std::max(worst, std::fabs(chi / sum - 1.0));
      }
    return detail::within(worst, 1e-10);
  }));

  out.push_back(guarded("quadrature.kappa-convention", "kappa of y^{-c} is c/(4 y^2)", [] {
    double worst = 0.0;
    for (double c : {0.5, 1.0, 1.5, 3.0})
      for (double y : {0.5, 1.0, 2.0}) {
        const double kappa =
            kappa_from_log([c](const PlanckPoint& s) { return LogValue::from_log(-c * std::log(s.im())); },
                           PlanckPoint::on_axis(y))
                .kappa;
        worst = std::max(worst, std::fabs(kappa - c / (4.0 * y * y)));
      }
    return detail::within(worst, 1e-8);
  }));

  out.push_back(guarded("quadrature.gaussian", "gaussian_weighted matches the closed form", [] {
    double worst = 0.0;
    for (double a : {-0.1, -1.0, -7.0})
      for (double mu : {-5.0, 0.0, 0.5, 20.0}) {
        const auto v = gaussian_weighted([](double) { return LogValue::from_log(0.0); }, a, mu);
        const double exact = 0.5 * std::log(M_PI / -a) - mu * mu / a;
        worst = std::max(worst, std::fabs(std::expm1(v.log_magnitude - exact)));
      }
    return detail::within(worst, 1e-12);
  }));

  out.push_back(guarded("toeplitz.monotone", "Q is positive, increasing and 1 at t", [] {
    double worst = 0.0;
    bool increasing = true;
    for (int k : {0, 3})
      for (double t : {-0.6, -1.9}) {
        worst = std::max(worst, std::fabs(toeplitz::q_scalar({k, t}, t).real() - 1.0));
        double previous = 0.0;
        for (int i = 0; i < 30; ++i) {
          const double q = toeplitz::q_scalar({k, t}, 6.0 * t + i * (0.51 * t - 6.0 * t) / 29.0).real();
          increasing = increasing && q > previous;
          previous = q;
        }
      }
    auto r = detail::within(worst, 1e-12, increasing ? "increasing" : "not increasing");
    r.passed = r.passed && increasing;
    return r;
  }));

  out.push_back(guarded("quantization.closed-ratio", "corrected quadrature over closed form is constant", [] {
    double worst = 0.0;
    for (const auto& rs : {lie::su2(), lie::torus(1), lie::torus(2)})
      for (int k = 0; k <= 6; ++k) {
        const auto lambda = lie::indexed_weight(rs, k);
        for (double y : {0.5, 1.0, 2.0}) {
          const auto s = PlanckPoint::on_axis(y);
          worst = std::max(worst, std::fabs(std::expm1(quantization::p_group_quadrature(s, rs, lambda, true).log_magnitude -
                                                       quantization::p_group_closed(s, rs, lambda).log_magnitude)));
        }
      }
    return detail::within(worst, 1e-7);
  }));

  out.push_back(guarded("quantization.su2-bare-sum", "bare su(2) quadrature matches the closed sum", [] {
    const auto rs = lie::su2();
    double worst = 0.0;
    const double constant = std::log(8.0 * std::sqrt(M_PI));
    for (int k = 0; k <= 6; ++k)
      for (double y : {0.5, 1.0, 2.0}) {
        const auto s = PlanckPoint::on_axis(y);
        const double diff = quantization::p_group_quadrature(s, rs, lie::indexed_weight(rs, k), false).log_magnitude -
                            quantization::p_su2_closed(s, k).log_magnitude - constant;
        worst = std::max(worst, std::fabs(std::expm1(diff)));
      }
    return detail::within(worst, 1e-7);
  }));

  out.push_back(guarded("quantization.scaling", "kappa ignores constant factors", [] {
    const auto model = quantization::sphere_model(2);
    const auto s = PlanckPoint::on_axis(1.0);
    const quantization::EngineOptions options;
    auto kappa = [&](double c) {
      return kappa_from_log(
                 [&](const PlanckPoint& q) { return quantization::log_p_quadrature(model, 7, q, options, 56.25).scaled_by_exp(c); }, s)
          .kappa;
    };
    return detail::within(std::fabs(kappa(3.0) - kappa(0.0)), 1e-9);
  }));

  out.push_back(guarded("quantization.sphere-rate", "sphere:2 ratio error shrinks at least 3x from k=10 to 20", [] {
    const auto s2 = quantization::sphere_model(2);
    const auto s = PlanckPoint::on_axis(1.0);
    auto err = [&](int k) {
      return std::fabs(quantization::curvature(s2, k, s).kappa / quantization::sphere_asymptote(k, 2, s) - 1.0);
    };
    const double shrink = err(10) / err(20);
    auto r = detail::within(1.0 / shrink, 1.0 / 3.0, "shrink factor " + detail::fmt(shrink));
    return r;
  }));

  out.push_back(guarded("quantization.im-only", "2-D and Im-only kappa paths agree", [] {
    const auto model = quantization::parse_model("group:su2", false);
    quantization::EngineOptions full;
    full.kappa.im_only = false;
    const auto s = PlanckPoint(0.3, 1.0);
    const double a = quantization::curvature(model, 3, s).kappa;
    const double b = quantization::curvature(model, 3, s, full).kappa;
    return detail::within(std::fabs(a - b), 10.0 * quantization::EngineOptions{}.fd_tolerance);
  }));

  out.push_back(guarded("hilbert.unitary", "transport is unitary for skew-Hermitian forms", [seed] {
    using namespace hilbert;
    std::mt19937_64 rng(seed + 4);
    std::uniform_real_distribution<double> u(-1.4, 1.4);
    const auto cf = detail::wavy_abelian();
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const Matrix f = transport_or_throw(
          cf, BasePath::polyline({detail::pt(u(rng), u(rng)), detail::pt(u(rng), u(rng)), detail::pt(u(rng), u(rng))}));
      worst = std::max(worst, (f.adjoint() * f - Matrix::Identity(1, 1)).norm());
    }
    return detail::within(worst, 1e-8);
  }));

  out.push_back(guarded("hilbert.abelian-square", "unit-square holonomy of the area form", [] {
    using namespace hilbert;
    const Complex h = transport_or_throw(examples::abelian_area(), rectangle_loop(0.0, 0.0, 1.0, 1.0))(0, 0);
    return detail::within(std::abs(h - std::exp(Complex(0.0, 1.0))), 1e-8, "arg " + detail::fmt(std::arg(h)));
  }));

  return out;
}

}  // namespace quantfield::verify

#pragma once

// Finite-rank connections over rectangles: A(d_i) are n x n complex matrices
// depending on the base point, with covariant derivative d + A.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "quantfield/errors.hpp"

namespace quantfield::hilbert {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// form(p)[i] = A(d_i) at p.
using FormFunction = std::function<std::vector<Matrix>(const Point&)>;
// derivative(p, i)[j] = d_i A(d_j) at p.
using FormDerivative = std::function<std::vector<Matrix>(const Point&, int)>;

struct ConnectionField {
  Point lower, upper;
  int fiber_dim = 1;
  FormFunction form;
  FormDerivative derivative;     // optional exact derivatives
  std::optional<Matrix> metric;  // constant Hermitian fiber metric

  int base_dim() const { return static_cast<int>(lower.size()); }
  double diameter() const { return (upper - lower).norm(); }
  bool contains(const Point& p, double margin = 0.0) const {
    if (p.size() != lower.size()) return false;
    for (int i = 0; i < base_dim(); ++i)
      if (p(i) < lower(i) + margin || p(i) > upper(i) - margin) return false;
    return true;
  }
  // Finite-difference step for derivatives of A.
  double fd_step() const { return 1e-4 * diameter(); }
};

inline void validate(const ConnectionField& cf) {
  require(cf.lower.size() == cf.upper.size(), "base bounds have mismatched dimensions");
  require(cf.base_dim() >= 1 && cf.base_dim() <= 3, "base dimension must be 1, 2 or 3");
  for (int i = 0; i < cf.base_dim(); ++i) require(cf.upper(i) > cf.lower(i), "base rectangle must have positive extent");
  require(cf.fiber_dim >= 1, "fiber dimension must be positive");
  require(static_cast<bool>(cf.form), "connection form is missing");
  if (cf.metric) {
    require(cf.metric->rows() == cf.fiber_dim && cf.metric->cols() == cf.fiber_dim, "metric has wrong size");
    require((*cf.metric - cf.metric->adjoint()).norm() <= 1e-12 * cf.metric->norm(), "metric must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(*cf.metric);
    require(eig.eigenvalues().minCoeff() > 0.0, "metric must be positive definite");
  }
}

inline std::vector<Matrix> evaluate_form(const ConnectionField& cf, const Point& p) {
  auto a = cf.form(p);
  require(static_cast<int>(a.size()) == cf.base_dim(), "connection form returned the wrong number of components");
  for (const auto& m : a)
    require(m.rows() == cf.fiber_dim && m.cols() == cf.fiber_dim, "connection form returned a matrix of wrong size");
  return a;
}

// A(v) = sum_i v_i A(d_i).
inline Matrix contract(const std::vector<Matrix>& a, const Point& v) {
  Matrix out = Matrix::Zero(a.front().rows(), a.front().cols());
  for (std::size_t i = 0; i < a.size(); ++i) out += v(static_cast<Eigen::Index>(i)) * a[i];
  return out;
}

struct CurvatureSample {
  Point point;
  int i = 0, j = 1;
  Matrix value;
};

// d_i A(d_j) by central differences at h and 2h, Richardson-combined,
// unless exact derivatives are supplied.
inline Matrix form_partial(const ConnectionField& cf, const Point& p, int i, int j) {
  if (cf.derivative) return cf.derivative(p, i).at(static_cast<std::size_t>(j));
  auto central = [&](double h) {
    Point plus = p, minus = p;
    plus(i) += h;
    minus(i) -= h;
    return Matrix((evaluate_form(cf, plus)[j] - evaluate_form(cf, minus)[j]) / (2.0 * h));
  };
  const double h = cf.fd_step();
  return (4.0 * central(h) - central(2.0 * h)) / 3.0;
}

// R(d_i, d_j) = d_i A(d_j) - d_j A(d_i) + [A(d_i), A(d_j)].
inline CurvatureSample curvature_at(const ConnectionField& cf, const Point& p, int i, int j) {
  require(i != j, "curvature needs two distinct coordinate directions");
  require(i >= 0 && j >= 0 && i < cf.base_dim() && j < cf.base_dim(), "coordinate index out of range");
  const double margin = cf.derivative ? 0.0 : 2.0 * cf.fd_step();
  if (!cf.contains(p, margin)) {
    std::ostringstream msg;
    msg << "point is outside the base or within " << margin << " of its boundary";
    throw InvalidInput(msg.str());
  }
  const auto a = evaluate_form(cf, p);
  Matrix r = form_partial(cf, p, i, j) - form_partial(cf, p, j, i) + a[i] * a[j] - a[j] * a[i];
  return {p, i, j, r};
}

// Cell-centred sample points, counts[i] per axis.
struct GridSpec {
  std::vector<int> counts;
};

inline std::vector<Point> grid_points(const ConnectionField& cf, const GridSpec& grid) {
  require(static_cast<int>(grid.counts.size()) == cf.base_dim(), "grid dimension does not match the base");
  for (int c : grid.counts) require(c >= 1, "grid counts must be positive");
  std::vector<Point> points;
  std::vector<int> idx(grid.counts.size(), 0);
  while (true) {
    Point p(cf.base_dim());
    for (int a = 0; a < cf.base_dim(); ++a)
      p(a) = cf.lower(a) + (idx[a] + 0.5) / grid.counts[a] * (cf.upper(a) - cf.lower(a));
    points.push_back(p);
    int a = 0;
    while (a < cf.base_dim() && ++idx[a] == grid.counts[a]) idx[a++] = 0;
    if (a == cf.base_dim()) break;
  }
  return points;
}

enum class Flatness { Flat, ProjectivelyFlat, NotProjectivelyFlat };

inline const char* to_string(Flatness f) {
  switch (f) {
    case Flatness::Flat: return "flat";
    case Flatness::ProjectivelyFlat: return "projectively-flat";
    case Flatness::NotProjectivelyFlat: return "not-projectively-flat";
  }
  return "?";
}

struct ScalarCurvature {
  Point point;
  int i = 0, j = 1;
  Complex r;
};

struct Classification {
  Flatness kind = Flatness::Flat;
  double max_curvature_norm = 0.0;   // Frobenius
  double max_traceless_norm = 0.0;   // distance from scalar multiples of Id
  std::vector<ScalarCurvature> r_field;  // filled when projectively flat
  std::optional<CurvatureSample> witness;  // largest offending sample
};

inline Complex scalar_part(const Matrix& r) { return r.trace() / static_cast<double>(r.rows()); }

inline Classification classify(const ConnectionField& cf, const GridSpec& grid, double tol) {
  validate(cf);
  require(tol > 0.0, "classification tolerance must be positive");
  Classification out;
  std::vector<CurvatureSample> samples;
  for (const auto& p : grid_points(cf, grid))
    for (int i = 0; i < cf.base_dim(); ++i)
      for (int j = i + 1; j < cf.base_dim(); ++j) samples.push_back(curvature_at(cf, p, i, j));
  const CurvatureSample* worst_norm = nullptr;
  const CurvatureSample* worst_traceless = nullptr;
  for (const auto& s : samples) {
    const double norm = s.value.norm();
    const Matrix traceless = s.value - scalar_part(s.value) * Matrix::Identity(cf.fiber_dim, cf.fiber_dim);
    const double off = traceless.norm();
    if (!worst_norm || norm > out.max_curvature_norm) {
      out.max_curvature_norm = norm;
      worst_norm = &s;
    }
    if (!worst_traceless || off > out.max_traceless_norm) {
      out.max_traceless_norm = off;
      worst_traceless = &s;
    }
  }
  if (out.max_curvature_norm <= tol) {
    out.kind = Flatness::Flat;
  } else if (out.max_traceless_norm <= tol) {
    out.kind = Flatness::ProjectivelyFlat;
    for (const auto& s : samples) out.r_field.push_back({s.point, s.i, s.j, scalar_part(s.value)});
    out.witness = *worst_norm;
  } else {
    out.kind = Flatness::NotProjectivelyFlat;
    out.witness = *worst_traceless;
  }
  return out;
}

// max_i || A_i^* h + h A_i ||: zero when d + A preserves the constant metric h.
inline double metric_compatibility_residual(const ConnectionField& cf, const Point& p) {
  require(cf.metric.has_value(), "connection has no metric");
  double worst = 0.0;
  for (const auto& a : evaluate_form(cf, p))
    worst = std::max(worst, (a.adjoint() * *cf.metric + *cf.metric * a).norm());
  return worst;
}

// Constant gauge change A -> g A g^{-1}.
inline ConnectionField conjugate(const ConnectionField& cf, const Matrix& g) {
  require(g.rows() == cf.fiber_dim && g.cols() == cf.fiber_dim, "gauge matrix has wrong size");
  Eigen::PartialPivLU<Matrix> lu(g);
  require(std::abs(lu.determinant()) > 1e-14, "gauge matrix is singular");
  const Matrix g_inv = lu.inverse();
  ConnectionField out = cf;
  const auto form = cf.form;
  out.form = [form, g, g_inv](const Point& p) {
    auto a = form(p);
    for (auto& m : a) m = g * m * g_inv;
    return a;
  };
  if (cf.derivative) {
    const auto deriv = cf.derivative;
    out.derivative = [deriv, g, g_inv](const Point& p, int i) {
      auto d = deriv(p, i);
      for (auto& m : d) m = g * m * g_inv;
      return d;
    };
  }
  if (cf.metric) out.metric = g_inv.adjoint() * *cf.metric * g_inv;
  return out;
}

namespace examples {

inline ConnectionField on_rectangle(Point lower, Point upper, int n) {
  ConnectionField cf;
  cf.lower = std::move(lower);
  cf.upper = std::move(upper);
  cf.fiber_dim = n;
  return cf;
}

inline ConnectionField zero(int n, int d = 2, double half_width = 2.0) {
  auto cf = on_rectangle(Point::Constant(d, -half_width), Point::Constant(d, half_width), n);
  cf.form = [n, d](const Point&) { return std::vector<Matrix>(d, Matrix::Zero(n, n)); };
  cf.derivative = [n, d](const Point&, int) { return std::vector<Matrix>(d, Matrix::Zero(n, n)); };
  cf.metric = Matrix::Identity(n, n);
  return cf;
}

// A(d_x) = i y D, A(d_y) = 0 with D diagonal; curvature -i D.
inline ConnectionField linear_potential(const Eigen::VectorXd& diag, double half_width = 2.0) {
  const int n = static_cast<int>(diag.size());
  auto cf = on_rectangle(Point::Constant(2, -half_width), Point::Constant(2, half_width), n);
  const Matrix d = diag.cast<Complex>().asDiagonal();
  cf.form = [d, n](const Point& p) {
    return std::vector<Matrix>{Complex(0.0, p(1)) * d, Matrix::Zero(n, n)};
  };
  cf.derivative = [d, n](const Point&, int i) {
    if (i == 1) return std::vector<Matrix>{Complex(0.0, 1.0) * d, Matrix::Zero(n, n)};
    return std::vector<Matrix>{Matrix::Zero(n, n), Matrix::Zero(n, n)};
  };
  cf.metric = Matrix::Identity(n, n);
  return cf;
}

inline ConnectionField abelian_area(double half_width = 2.0) {
  return linear_potential(Eigen::VectorXd::Ones(1), half_width);
}

inline ConnectionField constant(const std::vector<Matrix>& a, double half_width = 2.0) {
  require(!a.empty(), "constant connection needs at least one component");
  const int n = static_cast<int>(a.front().rows());
  const int d = static_cast<int>(a.size());
  auto cf = on_rectangle(Point::Constant(d, -half_width), Point::Constant(d, half_width), n);
  cf.form = [a](const Point&) { return a; };
  cf.derivative = [n, d](const Point&, int) { return std::vector<Matrix>(d, Matrix::Zero(n, n)); };
  return cf;
}

// Flat and non-abelian: A(d_x) = -X, A(d_y) = -exp(xX) Y exp(-xX), the
// pure gauge of exp(xX) exp(yY).
inline ConnectionField pure_gauge(const Matrix& x_gen, const Matrix& y_gen, double half_width = 1.5) {
  const int n = static_cast<int>(x_gen.rows());
  auto cf = on_rectangle(Point::Constant(2, -half_width), Point::Constant(2, half_width), n);
  cf.form = [x_gen, y_gen](const Point& p) {
    const Matrix e = (p(0) * x_gen).exp();
    const Matrix e_inv = (-p(0) * x_gen).exp();
    return std::vector<Matrix>{-x_gen, -(e * y_gen * e_inv)};
  };
  if ((x_gen + x_gen.adjoint()).norm() < 1e-14 && (y_gen + y_gen.adjoint()).norm() < 1e-14)
    cf.metric = Matrix::Identity(n, n);
  return cf;
}

// Pauli matrices times i, a basis of su(2).
inline Matrix i_pauli(int which) {
  Matrix m = Matrix::Zero(2, 2);
  const Complex i(0.0, 1.0);
  if (which == 0) { m(0, 1) = i; m(1, 0) = i; }
  if (which == 1) { m(0, 1) = 1.0; m(1, 0) = -1.0; }
  if (which == 2) { m(0, 0) = i; m(1, 1) = -i; }
  return m;
}

}  // namespace examples

}  // namespace quantfield::hilbert

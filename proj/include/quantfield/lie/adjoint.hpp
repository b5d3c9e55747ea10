#pragma once

// Structure constants of compact Lie algebras, the adjoint representation,
// and the analytic matrix functions of ad(zeta) entering the half-form
// densities.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quantfield/errors.hpp"

namespace quantfield::lie {

using CMatrix = Eigen::MatrixXcd;

// [e_i, e_j] = sum_k c(i, j, k) e_k.
struct AdjointData {
  std::string name;
  int dim = 0;
  std::vector<double> constants;  // dim^3, index (i * dim + j) * dim + k
  // Cartan subalgebra: column r is the coordinate vector of the r-th torus axis.
  Eigen::MatrixXd torus_embedding;
  // Symmetric pair data: basis indices of g_o and p, and the generator Z of
  // a maximal abelian line in p.
  std::vector<int> go_indices;
  std::vector<int> p_indices;
  int rank_one_generator = -1;

  double c(int i, int j, int k) const { return constants[(static_cast<std::size_t>(i) * dim + j) * dim + k]; }
  double& c(int i, int j, int k) { return constants[(static_cast<std::size_t>(i) * dim + j) * dim + k]; }

  int rank() const { return static_cast<int>(torus_embedding.cols()); }
  bool has_split() const { return !p_indices.empty(); }
  int dim_p() const { return static_cast<int>(p_indices.size()); }
};

inline void check_element(const AdjointData& adj, const Eigen::VectorXd& zeta) {
  if (zeta.size() != adj.dim)
    throw InvalidInput("algebra element has " + std::to_string(zeta.size()) +
                       " coordinates, expected " + std::to_string(adj.dim));
}

// Matrix of ad(zeta) in the chosen basis: column j holds [zeta, e_j].
inline Eigen::MatrixXd ad_matrix(const AdjointData& adj, const Eigen::VectorXd& zeta) {
  check_element(adj, zeta);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(adj.dim, adj.dim);
  for (int i = 0; i < adj.dim; ++i) {
    if (zeta(i) == 0.0) continue;
    for (int j = 0; j < adj.dim; ++j)
      for (int k = 0; k < adj.dim; ++k) m(k, j) += zeta(i) * adj.c(i, j, k);
  }
  return m;
}

// K(i, j) = tr(ad e_i ad e_j).
inline Eigen::MatrixXd killing_form(const AdjointData& adj) {
  std::vector<Eigen::MatrixXd> ads;
  for (int i = 0; i < adj.dim; ++i) ads.push_back(ad_matrix(adj, Eigen::VectorXd::Unit(adj.dim, i)));
  Eigen::MatrixXd k(adj.dim, adj.dim);
  for (int i = 0; i < adj.dim; ++i)
    for (int j = 0; j < adj.dim; ++j) k(i, j) = (ads[i] * ads[j]).trace();
  return k;
}

// Antisymmetry always; closure relations of the split when one is present.
inline void validate(const AdjointData& adj) {
  require(adj.dim > 0, "algebra dimension must be positive");
  require(adj.constants.size() == static_cast<std::size_t>(adj.dim) * adj.dim * adj.dim,
          "structure constant array has wrong size");
  for (int i = 0; i < adj.dim; ++i)
    for (int j = 0; j < adj.dim; ++j)
      for (int k = 0; k < adj.dim; ++k)
        if (std::fabs(adj.c(i, j, k) + adj.c(j, i, k)) > 1e-10) {
          std::ostringstream msg;
          msg << "structure constants not antisymmetric at (" << i << ", " << j << ", " << k << ")";
          throw InvalidInput(msg.str());
        }
  if (adj.torus_embedding.size() != 0)
    require(adj.torus_embedding.rows() == adj.dim, "torus embedding has wrong row count");
  if (!adj.has_split()) return;
  require(static_cast<int>(adj.go_indices.size() + adj.p_indices.size()) == adj.dim,
          "split must partition the basis");
  auto bracket_lands_in = [&](const std::vector<int>& left, const std::vector<int>& right,
                              const std::vector<int>& forbidden, const char* relation) {
    for (int i : left)
      for (int j : right)
        for (int k : forbidden)
          if (std::fabs(adj.c(i, j, k)) > 1e-10) {
            std::ostringstream msg;
            msg << "invalid symmetric split: " << relation << " fails for basis pair (" << i << ", "
                << j << "), component " << k << " = " << adj.c(i, j, k);
            throw InvalidInput(msg.str());
          }
  };
  bracket_lands_in(adj.go_indices, adj.go_indices, adj.p_indices, "[g_o, g_o] in g_o");
  bracket_lands_in(adj.go_indices, adj.p_indices, adj.go_indices, "[g_o, p] in p");
  bracket_lands_in(adj.p_indices, adj.p_indices, adj.p_indices, "[p, p] in g_o");
  require(adj.rank_one_generator >= 0, "symmetric pair needs a rank-one generator in p");
}

// Structure constants of the span of a matrix basis, by least squares on
// the flattened commutators.
inline AdjointData from_matrix_basis(std::string name, const std::vector<CMatrix>& basis) {
  const int dim = static_cast<int>(basis.size());
  require(dim > 0, "empty matrix basis");
  const auto n = basis.front().size();
  Eigen::MatrixXd stacked(2 * n, dim);
  for (int a = 0; a < dim; ++a) {
    Eigen::Map<const Eigen::VectorXcd> flat(basis[a].data(), n);
    stacked.col(a).head(n) = flat.real();
    stacked.col(a).tail(n) = flat.imag();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(stacked);
  require(qr.rank() == dim, "matrix basis is linearly dependent");
  AdjointData adj;
  adj.name = std::move(name);
  adj.dim = dim;
  adj.constants.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      const CMatrix bracket = basis[i] * basis[j] - basis[j] * basis[i];
      Eigen::Map<const Eigen::VectorXcd> flat(bracket.data(), n);
      Eigen::VectorXd rhs(2 * n);
      rhs.head(n) = flat.real();
      rhs.tail(n) = flat.imag();
      const Eigen::VectorXd coeffs = qr.solve(rhs);
      require((stacked * coeffs - rhs).norm() <= 1e-10 * std::max(1.0, rhs.norm()),
              "matrix basis does not span a Lie algebra");
      for (int k = 0; k < dim; ++k) adj.c(i, j, k) = std::fabs(coeffs(k)) < 1e-14 ? 0.0 : coeffs(k);
    }
  return adj;
}

// Even entire functions of x used as functions of ad(zeta).
enum class EvenFunction {
  Cos,        // cos x
  Sinc,       // sin x / x
  TwoSinc,    // 2 sin x / x
  SinTwoOverX // sin 2x / x
};

inline std::complex<double> evaluate(EvenFunction f, std::complex<double> x) {
  const bool small = std::abs(x) < 1e-6;
  const std::complex<double> x2 = x * x;
  switch (f) {
    case EvenFunction::Cos: return std::cos(x);
    case EvenFunction::Sinc: return small ? 1.0 - x2 / 6.0 : std::sin(x) / x;
    case EvenFunction::TwoSinc: return small ? 2.0 - x2 / 3.0 : 2.0 * std::sin(x) / x;
    case EvenFunction::SinTwoOverX: return small ? 2.0 - 4.0 * x2 / 3.0 : std::sin(2.0 * x) / x;
  }
  return 0.0;
}

// Coefficient of x^{2j} in the Taylor series.
inline double taylor_coefficient(EvenFunction f, int j) {
  const double sign = (j % 2 == 0) ? 1.0 : -1.0;
  switch (f) {
    case EvenFunction::Cos: return sign / std::tgamma(2.0 * j + 1.0);
    case EvenFunction::Sinc: return sign / std::tgamma(2.0 * j + 2.0);
    case EvenFunction::TwoSinc: return 2.0 * sign / std::tgamma(2.0 * j + 2.0);
    case EvenFunction::SinTwoOverX: return 2.0 * sign * std::pow(4.0, j) / std::tgamma(2.0 * j + 2.0);
  }
  return 0.0;
}

struct MatrixFunctionResult {
  CMatrix value;
  bool used_series = false;
  int series_order = 0;  // highest power of A retained
};

struct MatrixFunctionOptions {
  // Eigenvector matrices with condition number above this are treated as
  // near-defective.
  double max_condition = 1e8;
  bool force_series = false;
  int max_series_order = 400;
};

// f(A) by eigendecomposition, or by the truncated power series in A^2 when
// the eigenvector matrix is ill-conditioned.
inline MatrixFunctionResult matrix_function(EvenFunction f, const Eigen::MatrixXd& a,
                                            const MatrixFunctionOptions& options = {}) {
  const int n = static_cast<int>(a.rows());
  require(a.rows() == a.cols(), "matrix function needs a square matrix");
  if (!options.force_series) {
    Eigen::ComplexEigenSolver<CMatrix> solver(a.cast<std::complex<double>>());
    if (solver.info() == Eigen::Success) {
      const CMatrix& v = solver.eigenvectors();
      Eigen::JacobiSVD<CMatrix> svd(v);
      const auto& sv = svd.singularValues();
      const double condition = sv(n - 1) > 0.0 ? sv(0) / sv(n - 1) : std::numeric_limits<double>::infinity();
      if (condition <= options.max_condition) {
        Eigen::VectorXcd fd(n);
        for (int i = 0; i < n; ++i) fd(i) = evaluate(f, solver.eigenvalues()(i));
        return {v * fd.asDiagonal() * v.inverse(), false, 0};
      }
    }
  }
  const Eigen::MatrixXd a2 = a * a;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd sum = taylor_coefficient(f, 0) * power;
  int order = 0;
  for (int j = 1; 2 * j <= options.max_series_order; ++j) {
    power = power * a2;
    const double coefficient = taylor_coefficient(f, j);
    if (!std::isfinite(coefficient) || coefficient == 0.0) break;
    const Eigen::MatrixXd term = coefficient * power;
    sum += term;
    order = 2 * j;
    if (term.norm() <= 1e-17 * std::max(1.0, sum.norm()) && j >= 2) break;
  }
  return {sum.cast<std::complex<double>>(), true, order};
}

struct DensityValue {
  double value = 0.0;
  bool used_series = false;
  int series_order = 0;
};

// Group half-form density from the matrix function:
// sqrt(det(2 sin(ad zeta)/ad zeta)) * 2^{-rank/2}. The normalization removes
// the factor 2 contributed by each direction of the centralizer, so that on
// the torus it equals prod_{R+} 2 sinh alpha / alpha.
inline DensityValue half_form_density_group(const AdjointData& adj, const Eigen::VectorXd& zeta,
                                            const MatrixFunctionOptions& options = {}) {
  require(adj.rank() > 0, "algebra needs a torus embedding to fix its rank");
  const auto fn = matrix_function(EvenFunction::TwoSinc, ad_matrix(adj, zeta), options);
  const std::complex<double> det = fn.value.determinant();
  if (det.real() <= 0.0 || std::fabs(det.imag()) > 1e-8 * std::fabs(det.real()))
    throw NumericalFailure("half-form determinant is not positive");
  return {std::sqrt(det.real()) * std::pow(2.0, -0.5 * adj.rank()), fn.used_series, fn.series_order};
}

struct SymmetricAOperators {
  Eigen::MatrixXd a1;           // cos(ad zeta) on p
  Eigen::MatrixXd a2_factor;    // A2 = i * a2_factor, a2_factor = sin(ad zeta)/ad zeta on p
  bool used_series = false;
  int series_order = 0;
};

inline Eigen::MatrixXd restrict_to(const CMatrix& m, const std::vector<int>& indices) {
  const int n = static_cast<int>(indices.size());
  Eigen::MatrixXd block(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) block(r, c) = m(indices[r], indices[c]).real();
  return block;
}

inline SymmetricAOperators symmetric_A_operators(const AdjointData& adj, const Eigen::VectorXd& zeta,
                                                 const MatrixFunctionOptions& options = {}) {
  require(adj.has_split(), "algebra has no symmetric split");
  validate(adj);
  check_element(adj, zeta);
  for (int i : adj.go_indices)
    require(std::fabs(zeta(i)) <= 1e-12 * std::max(1.0, zeta.norm()), "zeta must lie in p");
  const Eigen::MatrixXd ad = ad_matrix(adj, zeta);
  const auto c = matrix_function(EvenFunction::Cos, ad, options);
  const auto s = matrix_function(EvenFunction::Sinc, ad, options);
  return {restrict_to(c.value, adj.p_indices), restrict_to(s.value, adj.p_indices),
          c.used_series || s.used_series, std::max(c.series_order, s.series_order)};
}

// i^m det(A2* A1 - A1* A2) on C (x) p at zeta = t Z; equals
// det(sin(2 ad tZ)/ad tZ | p) = 2 (sinh 2t / t)^{m-1}.
inline DensityValue half_form_density_sphere(const AdjointData& adj, double t, int m,
                                             const MatrixFunctionOptions& options = {}) {
  require(t >= 0.0, "sphere density needs t >= 0");
  require(m >= 2, "sphere density needs m >= 2");
  require(adj.has_split() && adj.dim_p() == m, "symmetric pair does not have dim p = m");
  Eigen::VectorXd zeta = Eigen::VectorXd::Zero(adj.dim);
  zeta(adj.rank_one_generator) = t;
  const auto ops = symmetric_A_operators(adj, zeta, options);
  const std::complex<double> i(0.0, 1.0);
  const CMatrix a1 = ops.a1.cast<std::complex<double>>();
  const CMatrix a2 = i * ops.a2_factor.cast<std::complex<double>>();
  const CMatrix form = a2.adjoint() * a1 - a1.adjoint() * a2;
  const std::complex<double> det = std::pow(i, m) * form.determinant();
  if (det.real() <= 0.0 || std::fabs(det.imag()) > 1e-8 * std::fabs(det.real()))
    throw NumericalFailure("sphere half-form determinant is not positive");
  return {det.real(), ops.used_series, ops.series_order};
}

}  // namespace quantfield::lie

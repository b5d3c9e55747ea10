#pragma once

// Shipped root data and structure constants.
//
// Normalization follows the su(2) coordinates tau = i diag(t, -t): |tau|^2 = t^2,
// positive root alpha(tau) = 2t, shifted weights lambda(tau) = (k + 1) t.
// Basis elements i sigma_a and i lambda_a (Gell-Mann) are orthonormal for
// |X|^2 = -tr(X^2)/2.

#include <cmath>
#include <complex>
#include <string>

#include "quantfield/lie/adjoint.hpp"
#include "quantfield/lie/root_system.hpp"

namespace quantfield::lie {

inline RootSystem torus(int rank) {
  require(rank >= 1 && rank <= 3, "shipped tori have rank 1 to 3");
  return make_root_system("torus" + std::to_string(rank), rank, {},
                          Eigen::MatrixXd::Identity(rank, rank));
}

inline RootSystem su2() {
  return make_root_system("su2", 1, {Vector::Constant(1, 2.0)}, Eigen::MatrixXd::Identity(1, 1));
}

// Torus coordinates tau = tau1 (i lambda_3) + tau2 (i lambda_8).
inline RootSystem su3() {
  const double r3 = std::sqrt(3.0);
  Vector a1(2), a2(2), a3(2);
  a1 << 2.0, 0.0;
  a2 << 1.0, r3;
  a3 << -1.0, r3;
  return make_root_system("su3", 2, {a1, a2, a3}, Eigen::MatrixXd::Identity(2, 2));
}

inline RootSystem root_system_preset(const std::string& name) {
  if (name == "su2") return su2();
  if (name == "su3") return su3();
  if (name == "torus1" || name == "u1") return torus(1);
  if (name == "torus2") return torus(2);
  if (name == "torus3") return torus(3);
  throw InvalidInput("unknown root system preset '" + name + "'");
}

namespace detail {

inline std::vector<CMatrix> pauli_basis() {
  const std::complex<double> i(0.0, 1.0);
  CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  return {i * s1, i * s2, i * s3};
}

inline std::vector<CMatrix> gell_mann_basis() {
  const std::complex<double> i(0.0, 1.0);
  std::vector<CMatrix> l(8, CMatrix::Zero(3, 3));
  l[0](0, 1) = l[0](1, 0) = 1.0;
  l[1](0, 1) = -i;
  l[1](1, 0) = i;
  l[2](0, 0) = 1.0;
  l[2](1, 1) = -1.0;
  l[3](0, 2) = l[3](2, 0) = 1.0;
  l[4](0, 2) = -i;
  l[4](2, 0) = i;
  l[5](1, 2) = l[5](2, 1) = 1.0;
  l[6](1, 2) = -i;
  l[6](2, 1) = i;
  const double s = 1.0 / std::sqrt(3.0);
  l[7](0, 0) = s;
  l[7](1, 1) = s;
  l[7](2, 2) = -2.0 * s;
  for (auto& m : l) m = i * m;
  return l;
}

}  // namespace detail

inline AdjointData su2_algebra() {
  AdjointData adj = from_matrix_basis("su2", detail::pauli_basis());
  adj.torus_embedding = Eigen::MatrixXd::Zero(3, 1);
  adj.torus_embedding(2, 0) = 1.0;
  validate(adj);
  return adj;
}

inline AdjointData su3_algebra() {
  AdjointData adj = from_matrix_basis("su3", detail::gell_mann_basis());
  adj.torus_embedding = Eigen::MatrixXd::Zero(8, 2);
  adj.torus_embedding(2, 0) = 1.0;
  adj.torus_embedding(7, 1) = 1.0;
  validate(adj);
  return adj;
}

// so(n) with basis E_ij = e_i e_j^T - e_j e_i^T, i < j, in lexicographic order.
inline std::vector<CMatrix> so_basis(int n) {
  std::vector<CMatrix> basis;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      CMatrix e = CMatrix::Zero(n, n);
      e(i, j) = 1.0;
      e(j, i) = -1.0;
      basis.push_back(e);
    }
  return basis;
}

inline AdjointData so_algebra(int n) {
  require(n >= 2, "so(n) needs n >= 2");
  AdjointData adj = from_matrix_basis("so" + std::to_string(n), so_basis(n));
  validate(adj);
  return adj;
}

// The symmetric pair so(m+1) / so(m) of the sphere S^m: p is spanned by the
// E_0j, g_o by the E_ij with i, j >= 1, and Z = E_01.
inline AdjointData sphere_pair(int m) {
  require(m >= 2 && m <= 6, "shipped sphere pairs cover 2 <= m <= 6");
  AdjointData adj = so_algebra(m + 1);
  adj.name = "so" + std::to_string(m + 1) + "/so" + std::to_string(m);
  int index = 0;
  for (int i = 0; i <= m; ++i)
    for (int j = i + 1; j <= m; ++j) {
      if (i == 0) adj.p_indices.push_back(index);
      else adj.go_indices.push_back(index);
      ++index;
    }
  adj.rank_one_generator = 0;  // E_01
  validate(adj);
  return adj;
}

}  // namespace quantfield::lie

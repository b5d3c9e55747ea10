#pragma once

// Root data on a Cartan subalgebra t: positive roots as linear forms,
// Weyl group elements, and an explicit inner product defining |tau|^2.
//
// Linear forms and points of t share coordinates: a form is stored as its
// coefficient vector l, acting by l . tau.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "quantfield/errors.hpp"
#include "quantfield/log_value.hpp"

namespace quantfield::lie {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct WeylElement {
  Matrix matrix;
  int det = 1;
};

struct RootSystem {
  std::string name;
  int rank = 0;
  std::vector<Vector> positive_roots;
  std::vector<WeylElement> weyl;
  Matrix inner_product;
  int manifold_dim = 0;

  int num_positive_roots() const { return static_cast<int>(positive_roots.size()); }

  double norm_sq(const Vector& tau) const { return tau.dot(inner_product * tau); }

  // Vector dual to a linear form under the inner product.
  Vector dual(const Vector& form) const { return inner_product.ldlt().solve(form); }

  // Half the sum of the positive roots.
  Vector rho() const {
    Vector r = Vector::Zero(rank);
    for (const auto& a : positive_roots) r += 0.5 * a;
    return r;
  }
};

namespace detail {

inline bool near(const Vector& a, const Vector& b, double tol = 1e-9) {
  return (a - b).norm() <= tol * std::max(1.0, a.norm());
}

inline bool contains_form(const std::vector<Vector>& forms, const Vector& f) {
  return std::any_of(forms.begin(), forms.end(), [&](const Vector& g) { return near(g, f); });
}

inline bool contains_matrix(const std::vector<WeylElement>& elems, const Matrix& m) {
  return std::any_of(elems.begin(), elems.end(),
                     [&](const WeylElement& e) { return (e.matrix - m).norm() <= 1e-9; });
}

}  // namespace detail

// Orthogonal reflection of t in the hyperplane ker(alpha).
inline Matrix reflection(const RootSystem& rs, const Vector& alpha) {
  const Vector dual = rs.dual(alpha);
  const double len_sq = alpha.dot(dual);
  require(len_sq > 0.0, "root has zero length");
  return Matrix::Identity(rs.rank, rs.rank) - 2.0 * dual * alpha.transpose() / len_sq;
}

// Closes the group generated by the reflections in the positive roots.
inline std::vector<WeylElement> generate_weyl_group(const RootSystem& rs) {
  std::vector<WeylElement> group{{Matrix::Identity(rs.rank, rs.rank), 1}};
  std::vector<Matrix> generators;
  for (const auto& a : rs.positive_roots) generators.push_back(reflection(rs, a));
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (const auto& g : generators) {
      Matrix product = g * group[i].matrix;
      if (!detail::contains_matrix(group, product)) {
        group.push_back({product, -group[i].det});
        require(group.size() <= 10000, "Weyl group closure did not terminate");
      }
    }
  }
  return group;
}

// Checks the structural invariants; throws InvalidInput on failure.
inline void validate(const RootSystem& rs) {
  require(rs.rank > 0, "root system rank must be positive");
  require(rs.inner_product.rows() == rs.rank && rs.inner_product.cols() == rs.rank,
          "inner product must be rank x rank");
  require((rs.inner_product - rs.inner_product.transpose()).norm() <= 1e-12,
          "inner product must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> eig(rs.inner_product);
  require(eig.eigenvalues().minCoeff() > 0.0, "inner product must be positive definite");
  require(rs.manifold_dim == rs.rank + 2 * rs.num_positive_roots(),
          "manifold dimension must equal rank + 2 |R+|");
  for (const auto& a : rs.positive_roots)
    require(a.size() == rs.rank, "positive root has wrong number of coordinates");
  require(!rs.weyl.empty(), "Weyl group must contain at least the identity");

  std::vector<Vector> all_roots;
  for (const auto& a : rs.positive_roots) {
    all_roots.push_back(a);
    all_roots.push_back(-a);
  }
  for (const auto& w : rs.weyl) {
    require(w.matrix.rows() == rs.rank && w.matrix.cols() == rs.rank,
            "Weyl element must be rank x rank");
    require(w.det == 1 || w.det == -1, "Weyl element determinant must be +1 or -1");
    require(std::fabs(w.matrix.determinant() - w.det) <= 1e-9,
            "Weyl element determinant does not match its recorded sign");
    const Matrix gram = w.matrix.transpose() * rs.inner_product * w.matrix;
    require((gram - rs.inner_product).norm() <= 1e-9 * rs.inner_product.norm(),
            "Weyl element is not orthogonal for the inner product");
    for (const auto& a : all_roots) {
      const Vector pulled = w.matrix.transpose() * a;  // alpha o w
      require(detail::contains_form(all_roots, pulled), "Weyl element does not permute the roots");
    }
  }
}

// Builds a root system and generates its Weyl group from reflections.
inline RootSystem make_root_system(std::string name, int rank, std::vector<Vector> positive_roots,
                                   Matrix inner_product) {
  RootSystem rs;
  rs.name = std::move(name);
  rs.rank = rank;
  rs.positive_roots = std::move(positive_roots);
  rs.inner_product = std::move(inner_product);
  rs.manifold_dim = rank + 2 * static_cast<int>(rs.positive_roots.size());
  rs.weyl = generate_weyl_group(rs);
  validate(rs);
  return rs;
}

inline void check_point(const RootSystem& rs, const Vector& tau) {
  if (tau.size() != rs.rank)
    throw InvalidInput("point of t has " + std::to_string(tau.size()) + " coordinates, expected " +
                       std::to_string(rs.rank));
}

// The highest weight of an irreducible character plus rho.
struct ShiftedWeight {
  Vector coefficients;
  std::string source_label;
};

// Simple roots: positive roots that are not a sum of two positive roots.
inline std::vector<Vector> simple_roots(const RootSystem& rs) {
  std::vector<Vector> simple;
  for (const auto& a : rs.positive_roots) {
    bool decomposable = false;
    for (const auto& b : rs.positive_roots)
      for (const auto& c : rs.positive_roots)
        if (detail::near(b + c, a)) decomposable = true;
    if (!decomposable) simple.push_back(a);
  }
  return simple;
}

// Fundamental weights dual to the simple coroots: 2<w_i, a_j>/<a_j, a_j> = delta_ij.
inline std::vector<Vector> fundamental_weights(const RootSystem& rs) {
  const auto simple = simple_roots(rs);
  require(static_cast<int>(simple.size()) == rs.rank,
          "fundamental weights need a semisimple root system");
  const Matrix ginv = rs.inner_product.inverse();
  Matrix coroot_pairing(rs.rank, rs.rank);  // row j: form w -> 2<w, a_j>/<a_j,a_j>
  for (int j = 0; j < rs.rank; ++j) {
    const double len_sq = simple[j].dot(ginv * simple[j]);
    coroot_pairing.row(j) = (2.0 / len_sq) * (ginv * simple[j]).transpose();
  }
  const Matrix inv = coroot_pairing.inverse();
  std::vector<Vector> weights;
  for (int i = 0; i < rs.rank; ++i) weights.push_back(inv.col(i));
  return weights;
}

inline ShiftedWeight shifted_weight(const RootSystem& rs, const Vector& highest_weight,
                                    std::string label) {
  require(highest_weight.size() == rs.rank, "highest weight has wrong number of coordinates");
  return {highest_weight + rs.rho(), std::move(label)};
}

// Integer-indexed family used by the presets: k times the first fundamental
// weight (semisimple case) or k times the first coordinate form (tori).
inline ShiftedWeight indexed_weight(const RootSystem& rs, int k) {
  Vector hw = Vector::Zero(rs.rank);
  if (rs.positive_roots.empty()) {
    hw(0) = k;
  } else {
    hw = k * fundamental_weights(rs).front();
  }
  return shifted_weight(rs, hw, std::to_string(k));
}

// prod_{alpha in R+} alpha(tau).
inline double root_product(const RootSystem& rs, const Vector& tau) {
  check_point(rs, tau);
  double product = 1.0;
  for (const auto& a : rs.positive_roots) product *= a.dot(tau);
  return product;
}

struct WeylDenominator {
  LogValue product_side;  // prod_{R+} sinh alpha(tau)
  LogValue sum_side;      // 2^{-|R+|} sum_w det w exp(2 rho(w tau))
};

// Weyl's denominator identity evaluated both ways, in log-magnitude form.
inline WeylDenominator weyl_denominator(const RootSystem& rs, const Vector& tau) {
  check_point(rs, tau);
  LogValue product = LogValue::from_log(0.0);
  for (const auto& a : rs.positive_roots) product = product * log_sinh(a.dot(tau));
  const Vector rho = rs.rho();
  std::vector<LogValue> terms;
  for (const auto& w : rs.weyl)
    terms.push_back(LogValue::from_log(2.0 * rho.dot(w.matrix * tau), w.det));
  const LogValue sum =
      signed_log_sum(terms).scaled_by_exp(-rs.num_positive_roots() * std::log(2.0));
  return {product, sum};
}

// sum_w det w exp(2 lambda(w tau)), the alternating numerator.
inline LogValue alternating_sum(const RootSystem& rs, const Vector& lambda, const Vector& tau) {
  std::vector<LogValue> terms;
  terms.reserve(rs.weyl.size());
  for (const auto& w : rs.weyl)
    terms.push_back(LogValue::from_log(2.0 * lambda.dot(w.matrix * tau), w.det));
  return signed_log_sum(terms);
}

struct CharacterValue {
  LogValue value;
  bool used_fallback = false;
};

// chi(exp(-2 i tau)) = sum_w det w e^{2 lambda(w tau)} / (2^{|R+|} prod sinh alpha(tau)).
//
// When some |alpha(tau)| falls below `floor` the quotient is 0/0; it is then
// replaced by a Richardson-combined average over offsets tau +- delta v along
// a direction v transverse to every wall.
inline CharacterValue character_at(const RootSystem& rs, const ShiftedWeight& lambda,
                                   const Vector& tau, double floor = 1e-6) {
  check_point(rs, tau);
  require(lambda.coefficients.size() == rs.rank, "weight has wrong number of coordinates");
  auto quotient = [&](const Vector& point) {
    LogValue denominator = LogValue::from_log(rs.num_positive_roots() * std::log(2.0));
    for (const auto& a : rs.positive_roots) denominator = denominator * log_sinh(a.dot(point));
    return alternating_sum(rs, lambda.coefficients, point) / denominator;
  };
  double min_root = std::numeric_limits<double>::infinity();
  for (const auto& a : rs.positive_roots) min_root = std::min(min_root, std::fabs(a.dot(tau)));
  if (min_root >= floor) return {quotient(tau), false};

  // Fixed transverse direction with incommensurate coordinates.
  Vector direction(rs.rank);
  for (int i = 0; i < rs.rank; ++i) direction(i) = 1.0 + 0.3183098861837907 * (i + 1) + 0.1 * i * i;
  double min_slope = std::numeric_limits<double>::infinity();
  for (const auto& a : rs.positive_roots) min_slope = std::min(min_slope, std::fabs(a.dot(direction)));
  require(min_slope > 1e-8, "fallback direction lies on a wall");
  const double delta = std::max(1e-3, 100.0 * floor) / min_slope;
  auto averaged = [&](double d) {
    return 0.5 * (quotient(tau + d * direction).value() + quotient(tau - d * direction).value());
  };
  const double value = (4.0 * averaged(delta) - averaged(2.0 * delta)) / 3.0;
  return {LogValue::from_value(value), true};
}

// |lambda*|^2 for the vector lambda* dual to lambda.
inline double dual_norm_sq(const RootSystem& rs, const ShiftedWeight& lambda) {
  require(lambda.coefficients.size() == rs.rank, "weight has wrong number of coordinates");
  return lambda.coefficients.dot(rs.dual(lambda.coefficients));
}

// prod_{R+} 2 sinh(alpha(tau)) / alpha(tau), with the value 2 at alpha(tau) = 0.
inline double half_form_density_torus(const RootSystem& rs, const Vector& tau) {
  check_point(rs, tau);
  double product = 1.0;
  for (const auto& a : rs.positive_roots) {
    const double x = a.dot(tau);
    product *= (std::fabs(x) < 1e-8) ? 2.0 * (1.0 + x * x / 6.0) : 2.0 * std::sinh(x) / x;
  }
  return product;
}

}  // namespace quantfield::lie

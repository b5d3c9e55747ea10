#pragma once

// Parallel transport F' = -A(gamma') F along piecewise-smooth paths, and the
// frames and twists built from it.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "quantfield/hilbert/connection.hpp"

namespace quantfield::hilbert {

struct PathPiece {
  std::function<Point(double)> point;     // on [0, 1]
  std::function<Point(double)> velocity;
};

struct BasePath {
  std::vector<PathPiece> pieces;
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;

  static BasePath segment(const Point& from, const Point& to) {
    BasePath path;
    const Point delta = to - from;
    path.pieces.push_back({[from, delta](double t) -> Point { return from + t * delta; },
                           [delta](double) -> Point { return delta; }});
    return path;
  }

  static BasePath polyline(const std::vector<Point>& vertices) {
    require(vertices.size() >= 2, "a polyline needs at least two vertices");
    BasePath path;
    for (std::size_t v = 0; v + 1 < vertices.size(); ++v)
      path.pieces.push_back(segment(vertices[v], vertices[v + 1]).pieces.front());
    return path;
  }

  static BasePath smooth(std::function<Point(double)> point, std::function<Point(double)> velocity) {
    BasePath path;
    path.pieces.push_back({std::move(point), std::move(velocity)});
    return path;
  }

  // Traverse this path, then `next`.
  BasePath then(const BasePath& next) const {
    BasePath out = *this;
    out.pieces.insert(out.pieces.end(), next.pieces.begin(), next.pieces.end());
    return out;
  }

  Point start() const { return pieces.front().point(0.0); }
  Point end() const { return pieces.back().point(1.0); }
};

// Axis-parallel rectangle loop through corners (x0, y0) and (x1, y1),
// counter-clockwise when x1 > x0 and y1 > y0.
inline BasePath rectangle_loop(double x0, double y0, double x1, double y1) {
  auto p = [](double x, double y) {
    Point q(2);
    q << x, y;
    return q;
  };
  return BasePath::polyline({p(x0, y0), p(x1, y0), p(x1, y1), p(x0, y1), p(x0, y0)});
}

inline void validate_path(const ConnectionField& cf, const BasePath& path) {
  require(!path.pieces.empty(), "path is empty");
  require(path.abs_tol > 0.0 && path.rel_tol > 0.0, "transport tolerances must be positive");
  constexpr int kSamples = 32;
  double length = 0.0;
  for (std::size_t k = 0; k < path.pieces.size(); ++k) {
    const auto& piece = path.pieces[k];
    require(piece.point && piece.velocity, "path piece is incomplete");
    if (k > 0)
      require((piece.point(0.0) - path.pieces[k - 1].point(1.0)).norm() <= 1e-12 * (1.0 + cf.diameter()),
              "path pieces are not contiguous");
    for (int s = 0; s <= kSamples; ++s) {
      const double t = static_cast<double>(s) / kSamples;
      const Point q = piece.point(t);
      if (!cf.contains(q)) {
        std::ostringstream msg;
        msg << "path leaves the base at piece " << k << ", t = " << t;
        throw InvalidInput(msg.str());
      }
      length += piece.velocity(t).norm() / (s == 0 || s == kSamples ? 2.0 : 1.0) / kSamples;
    }
  }
  require(std::isfinite(length), "path length is not finite");
}

struct TransportResult {
  Matrix value;
  bool converged = true;
  int steps = 0;
  int rejected = 0;
};

namespace detail {

// Dormand-Prince 5(4) on [0, 1] for F' = -A(gamma'(t)) F, with local error
// control max_ij |err_ij| / (atol + rtol max(|F_ij|, |F_new_ij|)) <= 1.
inline bool dormand_prince(const ConnectionField& cf, const PathPiece& piece, Matrix& f, double atol,
                           double rtol, int max_steps, TransportResult& stats) {
  static constexpr double c[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static constexpr double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  // Fifth-order weights are a[6]; these are the embedded fourth-order ones.
  static constexpr double b4[7] = {5179.0 / 57600, 0.0,          7571.0 / 16695, 393.0 / 640,
                                   -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
  auto generator = [&](double t) -> Matrix {
    return -contract(evaluate_form(cf, piece.point(t)), piece.velocity(t));
  };
  double t = 0.0;
  double h = 0.05;
  Matrix k[7];
  k[0] = generator(0.0) * f;
  int steps = 0;
  while (t < 1.0) {
    if (steps++ >= max_steps) return false;
    h = std::min(h, 1.0 - t);
    if (h < 1e-14) return false;
    for (int s = 1; s < 7; ++s) {
      Matrix stage = f;
      for (int r = 0; r < s; ++r)
        if (a[s][r] != 0.0) stage += h * a[s][r] * k[r];
      k[s] = generator(t + c[s] * h) * stage;
    }
    Matrix y5 = f;
    Matrix y4 = f;
    for (int r = 0; r < 7; ++r) {
      if (r < 6) y5 += h * a[6][r] * k[r];
      y4 += h * b4[r] * k[r];
    }
    double err = 0.0;
    for (Eigen::Index i = 0; i < f.size(); ++i) {
      const double scale = atol + rtol * std::max(std::abs(f(i)), std::abs(y5(i)));
      err = std::max(err, std::abs(y5(i) - y4(i)) / scale);
    }
    if (!std::isfinite(err)) return false;
    if (err <= 1.0) {
      t = (h >= 1.0 - t) ? 1.0 : t + h;
      f = y5;
      k[0] = k[6];  // first-same-as-last
      ++stats.steps;
    } else {
      ++stats.rejected;
    }
    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h *= factor;
  }
  return true;
}

}  // namespace detail

inline TransportResult parallel_transport(const ConnectionField& cf, const BasePath& path, int max_steps = 200000) {
  validate(cf);
  validate_path(cf, path);
  TransportResult out;
  out.value = Matrix::Identity(cf.fiber_dim, cf.fiber_dim);
  for (const auto& piece : path.pieces) {
    if (!detail::dormand_prince(cf, piece, out.value, path.abs_tol, path.rel_tol, max_steps, out)) {
      out.converged = false;
      return out;
    }
  }
  return out;
}

// Transport that throws instead of flagging.
inline Matrix transport_or_throw(const ConnectionField& cf, const BasePath& path) {
  auto r = parallel_transport(cf, path);
  if (!r.converged) throw NumericalFailure("parallel transport did not meet its ODE tolerance");
  return r.value;
}

// Raised when an operation that needs a flat connection meets curvature.
class CurvatureWitnessError : public InvalidInput {
public:
  CurvatureWitnessError(const std::string& what, CurvatureSample witness)
      : InvalidInput(what), witness_(std::move(witness)) {}
  const CurvatureSample& witness() const { return witness_; }

private:
  CurvatureSample witness_;
};

// Staircase from `from` to `to`, moving along the axes in `order`.
inline BasePath staircase(const Point& from, const Point& to, const std::vector<int>& order) {
  std::vector<Point> vertices{from};
  Point current = from;
  for (int axis : order) {
    if (current(axis) == to(axis)) continue;
    current(axis) = to(axis);
    vertices.push_back(current);
  }
  if (vertices.size() == 1) vertices.push_back(to);
  return BasePath::polyline(vertices);
}

inline std::vector<int> axis_order(int d, bool reversed) {
  std::vector<int> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  if (reversed) std::reverse(order.begin(), order.end());
  return order;
}

// Frame at p: transport from the basepoint along the staircase.
inline Matrix frame_at(const ConnectionField& cf, const Point& basepoint, const Point& p, bool reversed = false,
                       double tol = 1e-10) {
  BasePath path = staircase(basepoint, p, axis_order(cf.base_dim(), reversed));
  path.abs_tol = path.rel_tol = tol;
  return transport_or_throw(cf, path);
}

struct TrivializeOptions {
  double flat_tol = 1e-8;
  double transport_tol = 1e-10;
};

struct Trivialization {
  Point basepoint;
  std::vector<Point> points;
  std::vector<Matrix> frames;
  double path_independence = 0.0;  // max || F_axes - F_reversed_axes ||
};

inline Trivialization trivialize(const ConnectionField& cf, const Point& basepoint, const GridSpec& grid,
                                 const TrivializeOptions& options = {}) {
  require(cf.contains(basepoint), "basepoint lies outside the base");
  const auto verdict = classify(cf, grid, options.flat_tol);
  if (verdict.kind != Flatness::Flat) {
    std::ostringstream msg;
    msg << "connection is not flat: curvature norm " << verdict.witness->value.norm() << " at ("
        << verdict.witness->point.transpose() << ")";
    throw CurvatureWitnessError(msg.str(), *verdict.witness);
  }
  Trivialization out;
  out.basepoint = basepoint;
  out.points = grid_points(cf, grid);
  for (const auto& p : out.points) {
    const Matrix forward = frame_at(cf, basepoint, p, false, options.transport_tol);
    const Matrix backward = frame_at(cf, basepoint, p, true, options.transport_tol);
    out.path_independence = std::max(out.path_independence, (forward - backward).norm());
    out.frames.push_back(forward);
  }
  return out;
}

// Connection form in the frame F: F^{-1}(d_i F + A_i F), for every i. Zero
// for a genuine trivialization. Derivatives of F by central differences,
// Richardson-extrapolated, on frames transported with a tight tolerance.
inline double gauge_residual(const ConnectionField& cf, const Point& basepoint, const Point& p,
                             double transport_tol = 1e-13) {
  const double h = cf.fd_step();
  require(cf.contains(p, 2.0 * h), "point is too close to the boundary for the gauge check");
  const Matrix f = frame_at(cf, basepoint, p, false, transport_tol);
  const Matrix f_inv = f.inverse();
  const auto a = evaluate_form(cf, p);
  double worst = 0.0;
  for (int i = 0; i < cf.base_dim(); ++i) {
    auto central = [&](double step) {
      Point plus = p, minus = p;
      plus(i) += step;
      minus(i) -= step;
      return Matrix((frame_at(cf, basepoint, plus, false, transport_tol) -
                     frame_at(cf, basepoint, minus, false, transport_tol)) / (2.0 * step));
    };
    const Matrix df = (4.0 * central(h) - central(2.0 * h)) / 3.0;
    worst = std::max(worst, (f_inv * (df + a[i] * f)).norm());
  }
  return worst;
}

// Scalar 1-form: a(p)[i] = a(d_i).
using ScalarForm = std::function<std::vector<Complex>(const Point&)>;

// A + a Id, after checking da = -r on the grid, so the result is flat.
inline ConnectionField twist_to_flat(const ConnectionField& cf, const ScalarForm& potential, const GridSpec& grid,
                                     double tol = 1e-8) {
  require(static_cast<bool>(potential), "twisting potential is missing");
  const auto verdict = classify(cf, grid, tol);
  if (verdict.kind == Flatness::NotProjectivelyFlat)
    throw CurvatureWitnessError("connection is not projectively flat; no scalar twist can flatten it",
                                *verdict.witness);
  const double h = cf.fd_step();
  auto component = [&](const Point& q, int j) {
    const auto v = potential(q);
    require(static_cast<int>(v.size()) == cf.base_dim(), "twisting potential has the wrong number of components");
    return v[static_cast<std::size_t>(j)];
  };
  auto partial = [&](const Point& q, int i, int j) {
    auto central = [&](double step) {
      Point plus = q, minus = q;
      plus(i) += step;
      minus(i) -= step;
      return (component(plus, j) - component(minus, j)) / (2.0 * step);
    };
    return (4.0 * central(h) - central(2.0 * h)) / 3.0;
  };
  const int n = cf.fiber_dim;
  for (const auto& p : grid_points(cf, grid)) {
    require(cf.contains(p, 2.0 * h), "grid point too close to the boundary for the da check");
    for (int i = 0; i < cf.base_dim(); ++i)
      for (int j = i + 1; j < cf.base_dim(); ++j) {
        const Complex r = scalar_part(curvature_at(cf, p, i, j).value);
        const Complex da = partial(p, i, j) - partial(p, j, i);
        if (std::abs(da + r) > tol) {
          std::ostringstream msg;
          msg << "supplied potential fails da = -r at (" << p.transpose() << "), directions " << i << "," << j
              << ": da = " << da << ", r = " << r;
          throw InvalidInput(msg.str());
        }
      }
  }
  ConnectionField out = cf;
  const auto form = cf.form;
  out.form = [form, potential, n](const Point& q) {
    auto a = form(q);
    const auto scalar = potential(q);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += scalar[i] * Matrix::Identity(n, n);
    return a;
  };
  out.derivative = nullptr;
  return out;
}

}  // namespace quantfield::hilbert

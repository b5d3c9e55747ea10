#pragma once

// Connections sampled on a vertex grid, and frames exported as JSON.
//
//   {"lower": [..], "upper": [..], "counts": [nodes per axis], "fiber_dim": n,
//    "interpolation": 1 | 3,
//    "samples": [node-major list, axis 0 fastest: [A(d_1), ..., A(d_d)]],
//    "metric": matrix (optional)}
// A matrix is {"re": [[..]], "im": [[..]]}; "im" may be omitted.

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "quantfield/hilbert/transport.hpp"

namespace quantfield::hilbert {

namespace detail {

inline Matrix complex_matrix_from_json(const nlohmann::json& j, int n) {
  auto part = [&](const char* key) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    if (!j.contains(key)) return m;
    const auto& rows = j.at(key);
    require(rows.is_array() && static_cast<int>(rows.size()) == n, std::string("matrix part '") + key + "' has wrong size");
    for (int r = 0; r < n; ++r) {
      require(rows[r].is_array() && static_cast<int>(rows[r].size()) == n,
              std::string("matrix part '") + key + "' has wrong size");
      for (int c = 0; c < n; ++c) m(r, c) = rows[r][c].get<double>();
    }
    return m;
  };
  require(j.is_object() && j.contains("re"), "matrix must be an object with 're' (and optional 'im')");
  Matrix out(n, n);
  out.real() = part("re");
  out.imag() = part("im");
  return out;
}

inline nlohmann::json complex_matrix_to_json(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json rr = nlohmann::json::array(), ri = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ri.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

struct SampledForm {
  Point lower, upper;
  std::vector<int> counts;
  int order = 1;
  std::vector<std::vector<Matrix>> nodes;  // per node, d matrices

  int dim() const { return static_cast<int>(counts.size()); }

  const std::vector<Matrix>& at(const std::vector<int>& idx) const {
    std::size_t flat = 0, stride = 1;
    for (int a = 0; a < dim(); ++a) {
      flat += static_cast<std::size_t>(idx[a]) * stride;
      stride *= static_cast<std::size_t>(counts[a]);
    }
    return nodes[flat];
  }

  // Per-axis 1-D weights on node offsets: linear, or Catmull-Rom cubic with
  // clamped end nodes.
  void axis_weights(int a, double x, std::vector<int>& idx, std::vector<double>& w) const {
    const double spacing = (upper(a) - lower(a)) / (counts[a] - 1);
    double u = (x - lower(a)) / spacing;
    int cell = std::clamp(static_cast<int>(std::floor(u)), 0, counts[a] - 2);
    const double f = std::clamp(u - cell, 0.0, 1.0);
    idx.clear();
    w.clear();
    if (order == 1) {
      idx = {cell, cell + 1};
      w = {1.0 - f, f};
      return;
    }
    const double f2 = f * f, f3 = f2 * f;
    const double weights[4] = {-0.5 * f3 + f2 - 0.5 * f, 1.5 * f3 - 2.5 * f2 + 1.0, -1.5 * f3 + 2.0 * f2 + 0.5 * f,
                               0.5 * f3 - 0.5 * f2};
    for (int o = -1; o <= 2; ++o) {
      idx.push_back(std::clamp(cell + o, 0, counts[a] - 1));
      w.push_back(weights[o + 1]);
    }
  }

  std::vector<Matrix> operator()(const Point& p) const {
    std::vector<std::vector<int>> idx(static_cast<std::size_t>(dim()));
    std::vector<std::vector<double>> w(static_cast<std::size_t>(dim()));
    for (int a = 0; a < dim(); ++a) axis_weights(a, p(a), idx[a], w[a]);
    const Eigen::Index n = nodes.front().front().rows();
    std::vector<Matrix> out(static_cast<std::size_t>(dim()), Matrix::Zero(n, n));
    std::vector<std::size_t> pos(static_cast<std::size_t>(dim()), 0);
    std::vector<int> node(static_cast<std::size_t>(dim()));
    while (true) {
      double weight = 1.0;
      for (int a = 0; a < dim(); ++a) {
        node[a] = idx[a][pos[a]];
        weight *= w[a][pos[a]];
      }
      if (weight != 0.0) {
        const auto& sample = at(node);
        for (int c = 0; c < dim(); ++c) out[c] += weight * sample[c];
      }
      int a = 0;
      while (a < dim() && ++pos[a] == idx[a].size()) pos[a++] = 0;
      if (a == dim()) break;
    }
    return out;
  }
};

}  // namespace detail

inline ConnectionField connection_from_json(const nlohmann::json& j) {
  try {
    auto sampled = std::make_shared<detail::SampledForm>();
    const auto lower = j.at("lower").get<std::vector<double>>();
    const auto upper = j.at("upper").get<std::vector<double>>();
    sampled->counts = j.at("counts").get<std::vector<int>>();
    const int d = static_cast<int>(lower.size());
    require(d >= 1 && d <= 3 && static_cast<int>(upper.size()) == d && static_cast<int>(sampled->counts.size()) == d,
            "lower, upper and counts must have the same length (1 to 3)");
    sampled->lower = Eigen::Map<const Eigen::VectorXd>(lower.data(), d);
    sampled->upper = Eigen::Map<const Eigen::VectorXd>(upper.data(), d);
    sampled->order = j.value("interpolation", 1);
    require(sampled->order == 1 || sampled->order == 3, "interpolation order must be 1 or 3");
    std::size_t total = 1;
    for (int c : sampled->counts) {
      require(c >= 2, "each axis needs at least two grid nodes");
      total *= static_cast<std::size_t>(c);
    }
    const int n = j.at("fiber_dim").get<int>();
    require(n >= 1, "fiber_dim must be positive");
    const auto& samples = j.at("samples");
    require(samples.is_array() && samples.size() == total, "samples must hold one entry per grid node");
    for (const auto& s : samples) {
      require(s.is_array() && static_cast<int>(s.size()) == d, "each sample must hold one matrix per base direction");
      std::vector<Matrix> node;
      for (const auto& m : s) node.push_back(detail::complex_matrix_from_json(m, n));
      sampled->nodes.push_back(std::move(node));
    }
    ConnectionField cf;
    cf.lower = sampled->lower;
    cf.upper = sampled->upper;
    cf.fiber_dim = n;
    cf.form = [sampled](const Point& p) { return (*sampled)(p); };
    if (j.contains("metric")) cf.metric = detail::complex_matrix_from_json(j.at("metric"), n);
    validate(cf);
    return cf;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed connection JSON: ") + e.what());
  }
}

// Samples `cf` on a vertex grid with `counts` nodes per axis.
inline nlohmann::json connection_to_json(const ConnectionField& cf, const std::vector<int>& counts, int order = 3) {
  validate(cf);
  require(static_cast<int>(counts.size()) == cf.base_dim(), "counts must match the base dimension");
  nlohmann::json j;
  j["lower"] = std::vector<double>(cf.lower.data(), cf.lower.data() + cf.lower.size());
  j["upper"] = std::vector<double>(cf.upper.data(), cf.upper.data() + cf.upper.size());
  j["counts"] = counts;
  j["fiber_dim"] = cf.fiber_dim;
  j["interpolation"] = order;
  j["samples"] = nlohmann::json::array();
  std::vector<int> idx(counts.size(), 0);
  while (true) {
    Point p(cf.base_dim());
    for (int a = 0; a < cf.base_dim(); ++a)
      p(a) = cf.lower(a) + static_cast<double>(idx[a]) / (counts[a] - 1) * (cf.upper(a) - cf.lower(a));
    nlohmann::json node = nlohmann::json::array();
    for (const auto& m : evaluate_form(cf, p)) node.push_back(detail::complex_matrix_to_json(m));
    j["samples"].push_back(node);
    int a = 0;
    while (a < cf.base_dim() && ++idx[a] == counts[a]) idx[a++] = 0;
    if (a == cf.base_dim()) break;
  }
  if (cf.metric) j["metric"] = detail::complex_matrix_to_json(*cf.metric);
  return j;
}

inline nlohmann::json to_json(const Trivialization& t) {
  nlohmann::json j;
  j["basepoint"] = std::vector<double>(t.basepoint.data(), t.basepoint.data() + t.basepoint.size());
  j["path_independence"] = t.path_independence;
  j["frames"] = nlohmann::json::array();
  for (std::size_t i = 0; i < t.points.size(); ++i)
    j["frames"].push_back({{"point", std::vector<double>(t.points[i].data(), t.points[i].data() + t.points[i].size())},
                           {"frame", detail::complex_matrix_to_json(t.frames[i])}});
  return j;
}

}  // namespace quantfield::hilbert

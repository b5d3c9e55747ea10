#pragma once

// JSON loading for root systems and structure constants.
//
// Root system:
//   {"name": "...", "rank": n, "positive_roots": [[..]], "inner_product": [[..]],
//    "m": int, "weyl": [{"matrix": [[..]], "det": +-1}]}
// "weyl" may be omitted, in which case it is generated from reflections.
//
// Structure constants:
//   {"name": "...", "dim": d, "structure_constants": [[[c_ij^k]]],
//    "torus_embedding": [[..]] (d rows), "go": [..], "p": [..],
//    "rank_one_generator": idx}

#include <fstream>
#include <string>

#include <json.hpp>

#include "quantfield/lie/adjoint.hpp"
#include "quantfield/lie/root_system.hpp"

namespace quantfield::lie {

namespace detail {

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& j, const char* what) {
  require(j.is_array() && !j.empty(), std::string(what) + " must be a non-empty array of rows");
  const auto rows = j.size();
  const auto cols = j.front().size();
  Eigen::MatrixXd m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    require(j[r].is_array() && j[r].size() == cols, std::string(what) + " has ragged rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace detail

inline RootSystem root_system_from_json(const nlohmann::json& j) {
  try {
    RootSystem rs;
    rs.name = j.value("name", std::string("custom"));
    rs.rank = j.at("rank").get<int>();
    require(rs.rank > 0, "rank must be positive");
    for (const auto& root : j.at("positive_roots")) {
      require(root.is_array() && static_cast<int>(root.size()) == rs.rank,
              "positive root has wrong number of coordinates");
      Vector v(rs.rank);
      for (int i = 0; i < rs.rank; ++i) v(i) = root[i].get<double>();
      rs.positive_roots.push_back(v);
    }
    rs.inner_product = detail::matrix_from_json(j.at("inner_product"), "inner_product");
    rs.manifold_dim = j.at("m").get<int>();
    if (j.contains("weyl")) {
      for (const auto& w : j.at("weyl"))
        rs.weyl.push_back({detail::matrix_from_json(w.at("matrix"), "weyl matrix"), w.at("det").get<int>()});
    } else {
      rs.weyl = generate_weyl_group(rs);
    }
    validate(rs);
    return rs;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed root system JSON: ") + e.what());
  }
}

inline nlohmann::json to_json(const RootSystem& rs) {
  nlohmann::json j;
  j["name"] = rs.name;
  j["rank"] = rs.rank;
  j["m"] = rs.manifold_dim;
  j["positive_roots"] = nlohmann::json::array();
  for (const auto& a : rs.positive_roots) j["positive_roots"].push_back(std::vector<double>(a.data(), a.data() + a.size()));
  j["inner_product"] = detail::matrix_to_json(rs.inner_product);
  j["weyl"] = nlohmann::json::array();
  for (const auto& w : rs.weyl) j["weyl"].push_back({{"matrix", detail::matrix_to_json(w.matrix)}, {"det", w.det}});
  return j;
}

inline AdjointData adjoint_from_json(const nlohmann::json& j) {
  try {
    AdjointData adj;
    adj.name = j.value("name", std::string("custom"));
    adj.dim = j.at("dim").get<int>();
    require(adj.dim > 0, "dim must be positive");
    const auto& c = j.at("structure_constants");
    require(c.is_array() && static_cast<int>(c.size()) == adj.dim, "structure_constants must be dim x dim x dim");
    adj.constants.assign(static_cast<std::size_t>(adj.dim) * adj.dim * adj.dim, 0.0);
    for (int i = 0; i < adj.dim; ++i) {
      require(static_cast<int>(c[i].size()) == adj.dim, "structure_constants must be dim x dim x dim");
      for (int k2 = 0; k2 < adj.dim; ++k2) {
        require(static_cast<int>(c[i][k2].size()) == adj.dim, "structure_constants must be dim x dim x dim");
        for (int k = 0; k < adj.dim; ++k) adj.c(i, k2, k) = c[i][k2][k].get<double>();
      }
    }
    if (j.contains("torus_embedding"))
      adj.torus_embedding = detail::matrix_from_json(j.at("torus_embedding"), "torus_embedding");
    if (j.contains("p")) {
      adj.p_indices = j.at("p").get<std::vector<int>>();
      adj.go_indices = j.value("go", std::vector<int>{});
      adj.rank_one_generator = j.value("rank_one_generator", -1);
    }
    validate(adj);
    return adj;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed structure constant JSON: ") + e.what());
  }
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace quantfield::lie

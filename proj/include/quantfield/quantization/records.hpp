#pragma once

// Result records: one JSON object per (model, k, s), or one CSV row.

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quantfield/quantization/model.hpp"

namespace quantfield::quantization {

struct Record {
  std::string model;
  bool corrected = true;
  int k = 0;
  double re_s = 0.0, im_s = 1.0;
  double log_p = 0.0;
  std::optional<double> kappa;
  std::string method;
  nlohmann::json tolerances = nlohmann::json::object();
};

inline nlohmann::json tolerances_json(const EngineOptions& o) {
  return {{"kappa_rel_step", o.kappa.rel_step},
          {"richardson_levels", o.kappa.richardson_levels},
          {"fd_tolerance", o.fd_tolerance},
          {"group_rel_tol", o.group.rel_tol},
          {"sphere_rel_tol", o.sphere.rel_tol},
          {"circle_rel_tol", o.circle.rel_tol}};
}

inline Record make_record(const ModelSpec& model, int k, const PlanckPoint& s, const CurvatureDensity& c,
                          const EngineOptions& options) {
  return {model.label, model.corrected, k, s.re(), s.im(), c.log_p, c.kappa, c.method, tolerances_json(options)};
}

inline nlohmann::json to_json(const Record& r) {
  nlohmann::json j;
  j["model"] = r.model;
  j["corrected"] = r.corrected;
  j["k"] = r.k;
  j["s"] = {{"re", r.re_s}, {"im", r.im_s}};
  j["log_p"] = r.log_p;
  j["kappa"] = r.kappa ? nlohmann::json(*r.kappa) : nlohmann::json(nullptr);
  j["method"] = r.method;
  j["tolerances"] = r.tolerances;
  return j;
}

inline const char* csv_header() { return "model,corrected,k,re_s,im_s,log_p,kappa,method"; }

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string to_csv_row(const Record& r) {
  std::string row = r.model;
  row += r.corrected ? ",true," : ",false,";
  row += std::to_string(r.k) + "," + format_double(r.re_s) + "," + format_double(r.im_s) + "," +
         format_double(r.log_p) + "," + (r.kappa ? format_double(*r.kappa) : std::string()) + "," + r.method;
  return row;
}

// Canonical order: by k, then Im s, then Re s.
inline void sort_records(std::vector<Record>& records) {
  std::stable_sort(records.begin(), records.end(), [](const Record& a, const Record& b) {
    if (a.k != b.k) return a.k < b.k;
    if (a.im_s != b.im_s) return a.im_s < b.im_s;
    return a.re_s < b.re_s;
  });
}

}  // namespace quantfield::quantization

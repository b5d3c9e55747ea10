#pragma once

// Batch front end. Exit codes: 0 success, 1 numerical failure (or a failed
// verification row), 2 invalid input.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "quantfield/hilbert/json_io.hpp"
#include "quantfield/hilbert/transport.hpp"
#include "quantfield/parallel.hpp"
#include "quantfield/quantization/model.hpp"
#include "quantfield/quantization/records.hpp"
#include "quantfield/verify.hpp"

namespace quantfield::cli {

enum ExitCode : int { kOk = 0, kNumerical = 1, kInvalid = 2 };

struct RunConfig {
  std::string command;
  std::string model = "group:su2";
  bool corrected = true;
  std::vector<int> ks = {0};
  std::string k_range;  // sweep: first:last[:step]
  std::vector<double> im_s = {1.0};
  std::string im_s_range;  // sweep: lo:hi:count
  double re_s = 0.0;
  std::string format;  // json | csv; sweeps default to csv
  std::uint64_t seed = 1;
  std::string output;
  double tol = 1e-6;
  std::string example = "abelian-area";
  std::string loop = "unit-square";
  quantization::EngineOptions engine;
};

// Config files: key = value lines (INI) or a flat JSON object.
class FlatConfig : public CLI::ConfigBase {
public:
  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::string text((std::istreambuf_iterator<char>(input)), std::istreambuf_iterator<char>());
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos || text[first] != '{') {
      std::istringstream ini(text);
      return CLI::ConfigBase::from_config(ini);
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    std::vector<CLI::ConfigItem> items;
    auto scalar = [](const nlohmann::json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      if (v.is_number()) return v.dump();
      throw CLI::ConversionError("config values must be scalars or arrays of scalars");
    };
    for (const auto& [key, value] : j.items()) {
      CLI::ConfigItem item;
      item.name = key;
      if (value.is_array())
        for (const auto& v : value) item.inputs.push_back(scalar(v));
      else
        item.inputs.push_back(scalar(value));
      items.push_back(std::move(item));
    }
    return items;
  }
};

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

inline double to_double(const std::string& s, const std::string& what) {
  return quantization::detail::parse_double(s, what);
}

inline std::vector<int> expand_k_range(const std::string& text) {
  const auto parts = split(text, ':');
  require(parts.size() == 2 || parts.size() == 3, "k range must be first:last[:step]");
  const int first = quantization::detail::parse_int(parts[0], "k range start");
  const int last = quantization::detail::parse_int(parts[1], "k range end");
  const int step = parts.size() == 3 ? quantization::detail::parse_int(parts[2], "k range step") : 1;
  require(step > 0 && last >= first, "k range must be increasing with a positive step");
  std::vector<int> ks;
  for (int k = first; k <= last; k += step) ks.push_back(k);
  return ks;
}

inline std::vector<double> expand_y_range(const std::string& text) {
  const auto parts = split(text, ':');
  require(parts.size() == 3, "Im s range must be lo:hi:count");
  const double lo = to_double(parts[0], "Im s range start"), hi = to_double(parts[1], "Im s range end");
  const int n = quantization::detail::parse_int(parts[2], "Im s range count");
  require(lo > 0.0 && hi >= lo && n >= 1, "Im s range needs 0 < lo <= hi and count >= 1");
  std::vector<double> ys;
  for (int i = 0; i < n; ++i) ys.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
  return ys;
}

inline void check_grid(const RunConfig& c) {
  require(!c.ks.empty(), "at least one k is required");
  require(!c.im_s.empty(), "at least one Im s is required");
  for (int k : c.ks) require(k >= 0, "k must be non-negative (got " + std::to_string(k) + ")");
  for (double y : c.im_s) require(y > 0.0 && std::isfinite(y), "Im s must be positive");
  require(std::isfinite(c.re_s), "Re s must be finite");
}

inline std::string format_or(const RunConfig& c, const char* fallback) {
  const std::string f = c.format.empty() ? fallback : c.format;
  require(f == "json" || f == "csv", "format must be json or csv");
  return f;
}

inline void emit_records(std::vector<quantization::Record> records, const std::string& format, std::ostream& out) {
  quantization::sort_records(records);
  if (format == "csv") {
    out << quantization::csv_header() << "\n";
    for (const auto& r : records) out << quantization::to_csv_row(r) << "\n";
    return;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : records) j.push_back(quantization::to_json(r));
  out << j.dump(2) << "\n";
}

inline std::vector<quantization::Record> evaluate_grid(const RunConfig& c, bool with_kappa) {
  check_grid(c);
  const auto model = quantization::parse_model(c.model, c.corrected);
  std::vector<quantization::Record> records(c.ks.size() * c.im_s.size());
  parallel_for(records.size(), [&](std::size_t i) {
    const int k = c.ks[i / c.im_s.size()];
    const PlanckPoint s(c.re_s, c.im_s[i % c.im_s.size()]);
    if (with_kappa) {
      records[i] = quantization::make_record(model, k, s, quantization::curvature(model, k, s, c.engine), c.engine);
    } else {
      quantization::Record r;
      r.model = model.label;
      r.corrected = model.corrected;
      r.k = k;
      r.re_s = s.re();
      r.im_s = s.im();
      r.log_p = quantization::log_p_quadrature(model, k, s, c.engine).log_magnitude;
      r.method = "quadrature";
      r.tolerances = quantization::tolerances_json(c.engine);
      records[i] = std::move(r);
    }
  });
  return records;
}

inline int cmd_flatness(const RunConfig& c, std::ostream& out) {
  check_grid(c);
  const auto model = quantization::parse_model(c.model, c.corrected);
  const auto report = quantization::flatness_classify(model, c.ks, c.im_s, c.tol, c.engine);
  const std::string format = format_or(c, "json");
  if (format == "csv") {
    out << "model,corrected,verdict,max_abs_kappa,max_spread,k,k_prime,im_s,gap\n";
    out << model.label << "," << (model.corrected ? "true" : "false") << "," << quantization::to_string(report.verdict)
        << "," << quantization::format_double(report.max_abs_kappa) << ","
        << quantization::format_double(report.max_spread);
    if (report.witness)
      out << "," << report.witness->k << "," << report.witness->k_prime << ","
          << quantization::format_double(report.witness->im_s) << "," << quantization::format_double(report.witness->gap);
    else
      out << ",,,,";
    out << "\n";
    return kOk;
  }
  nlohmann::json j;
  j["model"] = model.label;
  j["corrected"] = model.corrected;
  j["verdict"] = quantization::to_string(report.verdict);
  j["tolerance"] = c.tol;
  j["max_abs_kappa"] = report.max_abs_kappa;
  j["max_spread"] = report.max_spread;
  j["witness"] = report.witness ? nlohmann::json{{"k", report.witness->k},
                                                 {"k_prime", report.witness->k_prime},
                                                 {"im_s", report.witness->im_s},
                                                 {"gap", report.witness->gap}}
                                : nlohmann::json(nullptr);
  std::vector<quantization::Record> records;
  for (std::size_t a = 0; a < report.ks.size(); ++a)
    for (std::size_t b = 0; b < report.ys.size(); ++b)
      records.push_back(quantization::make_record(model, report.ks[a], PlanckPoint::on_axis(report.ys[b]),
                                                  report.kappas[a * report.ys.size() + b], c.engine));
  j["records"] = nlohmann::json::array();
  for (const auto& r : records) j["records"].push_back(quantization::to_json(r));
  out << j.dump(2) << "\n";
  return kOk;
}

inline int cmd_asymptote(const RunConfig& c, std::ostream& out) {
  check_grid(c);
  const auto model = quantization::parse_model(c.model, c.corrected);
  require(model.kind == quantization::ModelKind::Sphere || model.kind == quantization::ModelKind::TruncatedCircle,
          "asymptote needs a sphere or circle model");
  const bool sphere = model.kind == quantization::ModelKind::Sphere;
  struct Row {
    int k;
    double y, kappa, reference, compare;
  };
  std::vector<Row> rows(c.ks.size() * c.im_s.size());
  parallel_for(rows.size(), [&](std::size_t i) {
    const int k = c.ks[i / c.im_s.size()];
    const double y = c.im_s[i % c.im_s.size()];
    const PlanckPoint s(c.re_s, y);
    const double kappa = quantization::curvature(model, k, s, c.engine).kappa;
    if (sphere) {
      const double a = quantization::sphere_asymptote(k, model.m, s);
      rows[i] = {k, y, kappa, a, a == 0.0 ? NAN : kappa / a};
    } else {
      const double limit = quantization::truncated_circle_kappa_limit(model.r, s, model.corrected);
      rows[i] = {k, y, kappa, limit, k * (kappa - limit)};
    }
  });
  // Target of the comparison column: 1 for spheres, r / (2 y^3) for circles.
  auto target = [&](const Row& r) { return sphere ? 1.0 : model.r / (2.0 * r.y * r.y * r.y); };
  const char* ref_name = sphere ? "asymptote" : "kappa_limit";
  const char* cmp_name = sphere ? "ratio" : "scaled_gap";
  if (format_or(c, "csv") == "csv") {
    out << "model,k,im_s,kappa," << ref_name << "," << cmp_name << ",target\n";
    for (const auto& r : rows)
      out << model.label << "," << r.k << "," << quantization::format_double(r.y) << ","
          << quantization::format_double(r.kappa) << "," << quantization::format_double(r.reference) << ","
          << quantization::format_double(r.compare) << "," << quantization::format_double(target(r)) << "\n";
    return kOk;
  }
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : rows)
    j.push_back({{"model", model.label},
                 {"k", r.k},
                 {"im_s", r.y},
                 {"kappa", r.kappa},
                 {ref_name, r.reference},
                 {cmp_name, std::isfinite(r.compare) ? nlohmann::json(r.compare) : nlohmann::json(nullptr)},
                 {"target", target(r)}});
  out << j.dump(2) << "\n";
  return kOk;
}

inline hilbert::ConnectionField transport_example(const std::string& name) {
  using namespace hilbert;
  if (name == "abelian-area") return examples::abelian_area();
  if (name == "pure-gauge") return examples::pure_gauge(examples::i_pauli(0), examples::i_pauli(1));
  if (name == "wavy-abelian") return verify::detail::wavy_abelian();
  throw InvalidInput("unknown transport example '" + name + "' (abelian-area, pure-gauge, wavy-abelian)");
}

// Loop and its enclosed flux under the unit area form (for the Stokes column).
inline std::pair<hilbert::BasePath, double> transport_loop(const std::string& name) {
  using namespace hilbert;
  if (name == "unit-square") return {rectangle_loop(0.0, 0.0, 1.0, 1.0), 1.0};
  if (name == "circle") {
    const double r = 0.8;
    auto point = [r](double t) { return verify::detail::pt(r * std::cos(2 * M_PI * t), r * std::sin(2 * M_PI * t)); };
    auto velocity = [r](double t) {
      return verify::detail::pt(-2 * M_PI * r * std::sin(2 * M_PI * t), 2 * M_PI * r * std::cos(2 * M_PI * t));
    };
    return {BasePath::smooth(point, velocity), M_PI * r * r};
  }
  if (name.rfind("rect:", 0) == 0) {
    const auto parts = split(name.substr(5), ',');
    require(parts.size() == 4, "rect loop must be rect:x0,y0,x1,y1");
    double v[4];
    for (int i = 0; i < 4; ++i) v[i] = to_double(parts[i], "rectangle corner");
    require(v[2] > v[0] && v[3] > v[1], "rectangle must have x1 > x0 and y1 > y0");
    return {rectangle_loop(v[0], v[1], v[2], v[3]), (v[2] - v[0]) * (v[3] - v[1])};
  }
  throw InvalidInput("unknown loop '" + name + "' (unit-square, circle, rect:x0,y0,x1,y1)");
}

inline int cmd_transport(const RunConfig& c, std::ostream& out) {
  const auto cf = transport_example(c.example);
  auto [path, area] = transport_loop(c.loop);
  const auto result = hilbert::parallel_transport(cf, path);
  if (!result.converged) {
    throw NumericalFailure("transport did not converge for example " + c.example + ", loop " + c.loop + " after " +
                           std::to_string(result.steps) + " steps");
  }
  nlohmann::json j;
  j["example"] = c.example;
  j["loop"] = c.loop;
  j["fiber_dim"] = cf.fiber_dim;
  j["steps"] = result.steps;
  j["rejected"] = result.rejected;
  j["holonomy"] = hilbert::detail::complex_matrix_to_json(result.value);
  j["unitarity_defect"] = (result.value.adjoint() * result.value -
                           hilbert::Matrix::Identity(cf.fiber_dim, cf.fiber_dim)).norm();
  if (cf.fiber_dim == 1) {
    const auto h = result.value(0, 0);
    j["phase_magnitude"] = std::abs(h);
    j["phase_argument"] = std::arg(h);
    if (c.example == "abelian-area") j["expected_argument"] = std::remainder(area, 2.0 * M_PI);
  }
  if (format_or(c, "json") == "csv") {
    out << "example,loop,steps,re,im,unitarity_defect\n";
    out << c.example << "," << c.loop << "," << result.steps << ","
        << quantization::format_double(result.value(0, 0).real()) << ","
        << quantization::format_double(result.value(0, 0).imag()) << ","
        << quantization::format_double(j["unitarity_defect"].get<double>()) << "\n";
    return kOk;
  }
  out << j.dump(2) << "\n";
  return kOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  auto rows = verify::acceptance_suite(c.seed);
  for (auto& r : verify::invariant_suite(c.seed)) rows.push_back(std::move(r));
  bool all = true;
  for (const auto& r : rows) all = all && r.passed;
  if (format_or(c, "json") == "json" && !c.format.empty()) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows)
      j.push_back({{"id", r.id},
                   {"name", r.name},
                   {"measured", std::isfinite(r.measured) ? nlohmann::json(r.measured) : nlohmann::json(nullptr)},
                   {"tolerance", std::isfinite(r.tolerance) ? nlohmann::json(r.tolerance) : nlohmann::json(nullptr)},
                   {"passed", r.passed},
                   {"detail", r.detail}});
    out << j.dump(2) << "\n";
  } else if (c.format == "csv") {
    out << "id,passed,measured,tolerance,name\n";
    for (const auto& r : rows)
      out << r.id << "," << (r.passed ? "true" : "false") << "," << quantization::format_double(r.measured) << ","
          << quantization::format_double(r.tolerance) << ",\"" << r.name << "\"\n";
  } else {
    for (const auto& r : rows) {
      char line[256];
      std::snprintf(line, sizeof line, "%-4s %-28s measured %-12.4g tol %-9.2g %s", r.passed ? "PASS" : "FAIL",
                    r.id.c_str(), r.measured, r.tolerance, r.name.c_str());
      out << line << "\n";
      if (!r.detail.empty()) out << "     " << r.detail << "\n";
    }
    std::size_t passed = 0;
    for (const auto& r : rows) passed += r.passed;
    out << passed << "/" << rows.size() << " checks passed\n";
  }
  return all ? kOk : kNumerical;
}

inline int dispatch(const RunConfig& c, std::ostream& out) {
  if (c.command == "p-value") {
    emit_records(evaluate_grid(c, false), format_or(c, "json"), out);
    return kOk;
  }
  if (c.command == "curvature") {
    emit_records(evaluate_grid(c, true), format_or(c, "json"), out);
    return kOk;
  }
  if (c.command == "sweep") {
    RunConfig grid = c;
    if (!c.k_range.empty()) grid.ks = expand_k_range(c.k_range);
    if (!c.im_s_range.empty()) grid.im_s = expand_y_range(c.im_s_range);
    emit_records(evaluate_grid(grid, true), format_or(c, "csv"), out);
    return kOk;
  }
  if (c.command == "flatness") return cmd_flatness(c, out);
  if (c.command == "asymptote") return cmd_asymptote(c, out);
  if (c.command == "transport") return cmd_transport(c, out);
  if (c.command == "verify") return cmd_verify(c, out);
  throw InvalidInput("unknown command '" + c.command + "'");
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  RunConfig c;
  CLI::App app{"Curvature of quantization Hilbert fields, and finite-rank transport experiments", "quantfield"};
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<FlatConfig>());
  app.set_config("--config", "", "Read options from a key=value or JSON file; flags override it");
  bool show_config = false;
  app.add_flag("--show-config", show_config, "Print the effective configuration and exit")->configurable(false);
  app.add_option("--model", c.model, "group:su2|su3|torusN|@file.json, torus:m, sphere:m, circle:r");
  app.add_flag("--corrected,!--bare", c.corrected, "Half-form corrected weight (default), or --bare")
      ->default_str("true");
  app.add_option("--k", c.ks, "Weight indices, comma separated")->delimiter(',');
  app.add_option("--k-range", c.k_range, "sweep: first:last[:step]");
  app.add_option("--im-s", c.im_s, "Im s values, comma separated")->delimiter(',');
  app.add_option("--im-s-range", c.im_s_range, "sweep: lo:hi:count");
  app.add_option("--re-s", c.re_s, "Re s");
  app.add_option("--format", c.format, "json or csv (sweep and asymptote default to csv)");
  app.add_option("--seed", c.seed, "Seed for Monte Carlo checks");
  app.add_option("--output,-o", c.output, "Write results to this file instead of stdout");
  app.add_option("--tol", c.tol, "Flatness tolerance on kappa")->check(CLI::PositiveNumber);
  app.add_option("--kappa-step", c.engine.kappa.rel_step, "Finite-difference step, relative to Im s")
      ->check(CLI::PositiveNumber);
  app.add_option("--richardson", c.engine.kappa.richardson_levels, "Richardson levels for kappa")
      ->check(CLI::Range(0, 3));
  app.add_option("--fd-tolerance", c.engine.fd_tolerance, "Expected kappa accuracy; closed forms must agree within 10x")
      ->check(CLI::PositiveNumber);
  app.add_option("--group-rel-tol", c.engine.group.rel_tol, "Gauss-Hermite convergence for groups")
      ->check(CLI::PositiveNumber);
  app.add_option("--sphere-rel-tol", c.engine.sphere.rel_tol, "Adaptive quadrature tolerance for spheres")
      ->check(CLI::PositiveNumber);
  app.add_option("--circle-rel-tol", c.engine.circle.rel_tol, "Adaptive quadrature tolerance for circles")
      ->check(CLI::PositiveNumber);
  app.add_option("--example", c.example, "transport: abelian-area, pure-gauge, wavy-abelian");
  app.add_option("--loop", c.loop, "transport: unit-square, circle, rect:x0,y0,x1,y1");

  const std::vector<std::pair<const char*, const char*>> commands = {
      {"p-value", "log p(s) on a (k, Im s) grid"},
      {"curvature", "kappa(s) = (1/4) Laplacian log p on a (k, Im s) grid"},
      {"flatness", "Flat / ProjectivelyFlat / NotProjectivelyFlat with a witness"},
      {"sweep", "kappa over --k-range x --im-s-range, CSV by default"},
      {"asymptote", "sphere or circle kappa against its large-k form"},
      {"transport", "holonomy of an example connection around a loop"},
      {"verify", "run the acceptance and invariant checks"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->callback([&c, name = std::string(name)] { c.command = name; });
  }
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }
  if (show_config) {
    out << app.config_to_str(true, false);
    return kOk;
  }
  if (c.command.empty()) {
    err << "a subcommand is required\n" << app.help();
    return kInvalid;
  }

  try {
    if (c.output.empty()) return detail::dispatch(c, out);
    std::ostringstream buffer;
    const int code = detail::dispatch(c, buffer);
    std::ofstream file(c.output, std::ios::binary);
    if (!file) throw InvalidInput("cannot write '" + c.output + "'");
    file << buffer.str();
    return code;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const nlohmann::json::exception& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalid;
  }
}

}  // namespace quantfield::cli

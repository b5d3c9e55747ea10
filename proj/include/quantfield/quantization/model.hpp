#pragma once

// Model selection, curvature dispatch and the flatness classifier.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "quantfield/differentiation.hpp"
#include "quantfield/lie/json_io.hpp"
#include "quantfield/lie/presets.hpp"
#include "quantfield/parallel.hpp"
#include "quantfield/quantization/circle.hpp"
#include "quantfield/quantization/group.hpp"
#include "quantfield/quantization/sphere.hpp"

namespace quantfield::quantization {

enum class ModelKind { Group, Torus, Sphere, TruncatedCircle };

struct ModelSpec {
  ModelKind kind = ModelKind::Group;
  std::string label;  // canonical text form, e.g. "group:su2"
  lie::RootSystem roots;  // Group and Torus
  int m = 1;
  double r = 1.0;  // TruncatedCircle
  bool corrected = true;
};

inline void validate(const ModelSpec& model) {
  switch (model.kind) {
    case ModelKind::Group:
    case ModelKind::Torus:
      lie::validate(model.roots);
      break;
    case ModelKind::Sphere:
      require(model.m >= 2, "sphere dimension m must be at least 2");
      require(model.corrected,
              "bare sphere quantization is not available: only the half-form corrected sphere "
              "is modelled (use --corrected)");
      break;
    case ModelKind::TruncatedCircle:
      require(model.r > 0.0 && std::isfinite(model.r), "truncation radius r must be positive");
      break;
  }
}

namespace detail {

inline int parse_int(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && !text.empty(), "invalid " + what + " '" + text + "'");
  return v;
}

inline double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  require(used == text.size() && !text.empty() && std::isfinite(v), "invalid " + what + " '" + text + "'");
  return v;
}

}  // namespace detail

inline ModelSpec group_model(lie::RootSystem rs, bool corrected) {
  ModelSpec model;
  model.kind = rs.positive_roots.empty() ? ModelKind::Torus : ModelKind::Group;
  model.label = (model.kind == ModelKind::Torus ? "torus:" + std::to_string(rs.rank) : "group:" + rs.name);
  model.m = rs.manifold_dim;
  model.roots = std::move(rs);
  model.corrected = corrected;
  validate(model);
  return model;
}

inline ModelSpec torus_model(int m, bool corrected) { return group_model(lie::torus(m), corrected); }

inline ModelSpec sphere_model(int m, bool corrected = true) {
  ModelSpec model;
  model.kind = ModelKind::Sphere;
  model.label = "sphere:" + std::to_string(m);
  model.m = m;
  model.corrected = corrected;
  validate(model);
  return model;
}

inline ModelSpec circle_model(double r, bool corrected) {
  ModelSpec model;
  model.kind = ModelKind::TruncatedCircle;
  std::ostringstream label;
  label << "circle:" << r;
  model.label = label.str();
  model.m = 1;
  model.r = r;
  model.corrected = corrected;
  validate(model);
  return model;
}

// group:su2 | group:su3 | group:torusN | group:@roots.json | torus:m | sphere:m | circle:r
inline ModelSpec parse_model(const std::string& text, bool corrected) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, "model '" + text + "' must have the form kind:parameter");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "group") {
    if (!arg.empty() && arg.front() == '@') {
      ModelSpec model = group_model(lie::root_system_from_json(lie::read_json_file(arg.substr(1))), corrected);
      model.label = text;
      return model;
    }
    return group_model(lie::root_system_preset(arg), corrected);
  }
  if (kind == "torus") return torus_model(detail::parse_int(arg, "torus dimension"), corrected);
  if (kind == "sphere") return sphere_model(detail::parse_int(arg, "sphere dimension"), corrected);
  if (kind == "circle") return circle_model(detail::parse_double(arg, "truncation radius"), corrected);
  throw InvalidInput("unknown model kind '" + kind + "' (expected group, torus, sphere or circle)");
}

// Coefficient of Im s removed from log p before differencing. A linear
// function of Im s has zero Laplacian, so kappa is unchanged, but large
// exponents (k + q)^2 y no longer swamp the finite differences.
inline double baseline_slope(const ModelSpec& model, int k) {
  switch (model.kind) {
    case ModelKind::Group:
    case ModelKind::Torus:
      return group_log_slope(model.roots, lie::indexed_weight(model.roots, k), model.corrected);
    case ModelKind::Sphere:
      return sphere_log_slope(k, model.m);
    case ModelKind::TruncatedCircle:
      return 0.0;
  }
  return 0.0;
}

struct EngineOptions {
  QuadratureSpec group = group_quadrature_defaults();
  QuadratureSpec sphere = sphere_quadrature_defaults();
  QuadratureSpec circle = circle_quadrature_defaults();
  KappaOptions kappa;
  // Expected accuracy of a finite-difference kappa; quadrature and closed
  // paths must agree within ten times this.
  double fd_tolerance = 1e-8;
};

// log p(s) - slope * Im s through the quadrature engine.
inline LogValue log_p_quadrature(const ModelSpec& model, int k, const PlanckPoint& s, const EngineOptions& options,
                                 double slope = 0.0) {
  require(k >= 0, "weight index k must be non-negative");
  switch (model.kind) {
    case ModelKind::Group:
    case ModelKind::Torus:
      return p_group_quadrature(s, model.roots, lie::indexed_weight(model.roots, k), model.corrected, options.group,
                                nullptr, slope);
    case ModelKind::Sphere:
      return p_sphere(s, k, model.m, options.sphere, slope);
    case ModelKind::TruncatedCircle:
      return p_truncated_circle(s, k, model.r, model.corrected, options.circle).scaled_by_exp(-slope * s.im());
  }
  throw InvalidInput("unknown model");
}

inline bool has_closed_form(const ModelSpec& model) {
  if (model.kind != ModelKind::Group && model.kind != ModelKind::Torus) return false;
  return has_group_closed_form(model.roots, model.corrected) || (!model.corrected && model.roots.name == "su2");
}

inline LogValue log_p_closed(const ModelSpec& model, int k, const PlanckPoint& s, double slope = 0.0) {
  require(has_closed_form(model), "model '" + model.label + "' has no closed form");
  require(k >= 0, "weight index k must be non-negative");
  if (has_group_closed_form(model.roots, model.corrected))
    return p_group_closed(s, model.roots, lie::indexed_weight(model.roots, k), model.corrected, slope);
  return p_su2_closed(s, k, slope);
}

struct CurvatureDensity {
  double kappa = 0.0;
  std::optional<double> kappa_closed;
  double log_p = 0.0;
  std::string method;  // "quadrature+fd"; kappa_closed is set when a closed form was also differenced
};

inline std::string describe_point(const ModelSpec& model, int k, const PlanckPoint& s) {
  std::ostringstream out;
  out << model.label << (model.corrected ? " corrected" : " bare") << ", k = " << k << ", s = " << s.re() << " + "
      << s.im() << "i";
  return out.str();
}

// kappa = (1/4) Laplacian_s log p. Where a closed form exists both paths
// run and must agree within 10 fd_tolerance.
inline CurvatureDensity curvature(const ModelSpec& model, int k, const PlanckPoint& s,
                                  const EngineOptions& options = {}) {
  validate(model);
  const double slope = baseline_slope(model, k);
  CurvatureDensity out;
  out.kappa = kappa_from_log([&](const PlanckPoint& q) { return log_p_quadrature(model, k, q, options, slope); }, s,
                             options.kappa)
                  .kappa;
  out.log_p = log_p_quadrature(model, k, s, options).log_magnitude;
  out.method = "quadrature+fd";
  if (has_closed_form(model)) {
    out.kappa_closed =
        kappa_from_log([&](const PlanckPoint& q) { return log_p_closed(model, k, q, slope); }, s, options.kappa)
            .kappa;
    if (std::fabs(*out.kappa_closed - out.kappa) > 10.0 * options.fd_tolerance) {
      std::ostringstream msg;
      msg << "quadrature and closed-form curvature disagree for " << describe_point(model, k, s) << ": "
          << out.kappa << " vs " << *out.kappa_closed;
      throw NumericalFailure(msg.str());
    }
  }
  return out;
}

// kappa at each (k, y) pair, k-major; evaluated in parallel.
inline std::vector<CurvatureDensity> curvature_grid(const ModelSpec& model, const std::vector<int>& ks,
                                                    const std::vector<PlanckPoint>& points,
                                                    const EngineOptions& options = {}) {
  std::vector<CurvatureDensity> out(ks.size() * points.size());
  parallel_for(out.size(), [&](std::size_t i) {
    out[i] = curvature(model, ks[i / points.size()], points[i % points.size()], options);
  });
  return out;
}

enum class Verdict { Flat, ProjectivelyFlat, NotProjectivelyFlat };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Flat:
      return "Flat";
    case Verdict::ProjectivelyFlat:
      return "ProjectivelyFlat";
    case Verdict::NotProjectivelyFlat:
      return "NotProjectivelyFlat";
  }
  return "?";
}

struct FlatnessWitness {
  int k = 0, k_prime = 0;
  double im_s = 0.0;
  double gap = 0.0;  // |kappa(k) - kappa(k')| at im_s
};

struct FlatnessReport {
  Verdict verdict = Verdict::Flat;
  double max_abs_kappa = 0.0;
  double max_spread = 0.0;  // largest spread of kappa across k at fixed s
  std::optional<FlatnessWitness> witness;
  std::vector<int> ks;
  std::vector<double> ys;
  std::vector<CurvatureDensity> kappas;  // k-major
};

// Flat if every |kappa| <= tol; projectively flat if kappa varies across k
// by at most tol at each s; otherwise the pair (k, k') and s with the
// largest gap is returned.
inline FlatnessReport flatness_classify(const ModelSpec& model, std::vector<int> ks, std::vector<double> ys,
                                        double tol = 1e-6, const EngineOptions& options = {}) {
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::sort(ys.begin(), ys.end());
  ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
  require(ks.size() >= 2, "flatness classification needs at least two weight indices");
  require(!ys.empty(), "flatness classification needs at least one Im s value");
  require(ks.size() * ys.size() >= 2, "flatness classification needs at least two grid points");
  require(tol > 0.0, "flatness tolerance must be positive");
  std::vector<PlanckPoint> points;
  for (double y : ys) points.push_back(PlanckPoint::on_axis(y));
  FlatnessReport report;
  report.ks = ks;
  report.ys = ys;
  report.kappas = curvature_grid(model, ks, points, options);
  FlatnessWitness best;
  for (std::size_t j = 0; j < ys.size(); ++j) {
    for (std::size_t a = 0; a < ks.size(); ++a) {
      const double ka = report.kappas[a * ys.size() + j].kappa;
      report.max_abs_kappa = std::max(report.max_abs_kappa, std::fabs(ka));
      for (std::size_t b = a + 1; b < ks.size(); ++b) {
        const double gap = std::fabs(ka - report.kappas[b * ys.size() + j].kappa);
        if (gap > best.gap) best = {ks[a], ks[b], ys[j], gap};
      }
    }
  }
  report.max_spread = best.gap;
  if (report.max_abs_kappa <= tol) {
    report.verdict = Verdict::Flat;
  } else if (report.max_spread <= tol) {
    report.verdict = Verdict::ProjectivelyFlat;
  } else {
    report.verdict = Verdict::NotProjectivelyFlat;
    report.witness = best;
  }
  return report;
}

}  // namespace quantfield::quantization

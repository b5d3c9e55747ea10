#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "quantfield/errors.hpp"

namespace quantfield {

struct BoxDomain {
  std::vector<double> lower, upper;
};

struct BallDomain {
  std::vector<double> center;
  double radius = 1.0;
};

using McDomain = std::variant<BoxDomain, BallDomain>;

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

inline double domain_volume(const McDomain& domain) {
  if (const auto* box = std::get_if<BoxDomain>(&domain)) {
    double v = 1.0;
    for (std::size_t i = 0; i < box->lower.size(); ++i) v *= box->upper[i] - box->lower[i];
    return v;
  }
  const auto& ball = std::get<BallDomain>(domain);
  const double n = static_cast<double>(ball.center.size());
  return std::pow(M_PI, n / 2.0) / std::tgamma(n / 2.0 + 1.0) * std::pow(ball.radius, n);
}

// Draws `samples` uniform points from the domain (balls by rejection from
// the bounding cube). The generator is owned by the call, so results depend
// only on the seed.
inline std::vector<std::vector<double>> mc_sample_points(const McDomain& domain,
                                                         std::int64_t samples,
                                                         std::uint64_t seed) {
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<std::vector<double>> points;
  points.reserve(static_cast<std::size_t>(samples));
  if (const auto* box = std::get_if<BoxDomain>(&domain)) {
    const std::size_t n = box->lower.size();
    for (std::int64_t s = 0; s < samples; ++s) {
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i)
        x[i] = box->lower[i] + (box->upper[i] - box->lower[i]) * unit(engine);
      points.push_back(std::move(x));
    }
    return points;
  }
  const auto& ball = std::get<BallDomain>(domain);
  const std::size_t n = ball.center.size();
  while (static_cast<std::int64_t>(points.size()) < samples) {
    std::vector<double> x(n);
    double r2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double u = 2.0 * unit(engine) - 1.0;
      x[i] = u;
      r2 += u * u;
    }
    if (r2 > 1.0) continue;
    for (std::size_t i = 0; i < n; ++i) x[i] = ball.center[i] + ball.radius * x[i];
    points.push_back(std::move(x));
  }
  return points;
}

inline void validate_domain(const McDomain& domain) {
  if (const auto* box = std::get_if<BoxDomain>(&domain)) {
    require(box->lower.size() == box->upper.size(), "box bounds have mismatched dimensions");
    require(!box->lower.empty() && box->lower.size() <= 4, "Monte Carlo supports 1 to 4 dimensions");
    for (std::size_t i = 0; i < box->lower.size(); ++i)
      require(box->upper[i] > box->lower[i], "box must have positive extent");
  } else {
    const auto& ball = std::get<BallDomain>(domain);
    require(!ball.center.empty() && ball.center.size() <= 4, "Monte Carlo supports 1 to 4 dimensions");
    require(ball.radius > 0.0, "ball radius must be positive");
  }
}

// Plain Monte Carlo: volume * sample mean, with the 1-sigma standard error.
inline McEstimate mc_integrate(const std::function<double(std::span<const double>)>& f,
                               const McDomain& domain, std::int64_t samples, std::uint64_t seed) {
  validate_domain(domain);
  require(samples >= 2, "Monte Carlo needs at least two samples");
  const double volume = domain_volume(domain);
  const auto points = mc_sample_points(domain, samples, seed);
  // Welford accumulation of mean and variance.
  double mean = 0.0, m2 = 0.0;
  std::int64_t count = 0;
  for (const auto& x : points) {
    const double v = f(x);
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }
  const double variance = m2 / static_cast<double>(count - 1);
  return {volume * mean, volume * std::sqrt(variance / static_cast<double>(count)), count};
}

}  // namespace quantfield

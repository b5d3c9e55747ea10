#pragma once

#include <complex>
#include <string>

#include "quantfield/errors.hpp"

namespace quantfield {

// A point s of the upper half plane; y = Im s acts as Planck's constant.
class PlanckPoint {
public:
  PlanckPoint(double re, double im) : s_(re, im) {
    require(im > 0.0, "Planck parameter must satisfy Im s > 0 (got " + std::to_string(im) + ")");
  }
  explicit PlanckPoint(std::complex<double> s) : PlanckPoint(s.real(), s.imag()) {}

  static PlanckPoint on_axis(double y) { return PlanckPoint(0.0, y); }

  double re() const { return s_.real(); }
  double im() const { return s_.imag(); }
  std::complex<double> value() const { return s_; }

  PlanckPoint shifted(double dx, double dy) const { return PlanckPoint(re() + dx, im() + dy); }

private:
  std::complex<double> s_;
};

}  // namespace quantfield

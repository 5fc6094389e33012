#pragma once

// Least-squares estimation of the polar coefficients c_d0 and b from glide
// descent-rate measurements. The sink model is linear in both coefficients,
// so the fit reduces to a 2x2 system of normal equations.

#include <span>

#include "soar/polar.hpp"

namespace soar {

struct GlideSample {
  double airspeed{0};  // m/s, > 0
  double sink{0};      // m/s, positive down
  double bank{0};      // rad
};

struct PolarFitResult {
  double c_d0{0};
  double b{0};
  double rms_residual{0};
  bool suspect{false};  // a fitted coefficient came out non-positive
};

// Minimize sum (sink_i - v_i*(c_d0*v_i^2/k + b*k/(v_i^2*cos^2(bank_i))))^2.
// Throws on fewer than 2 samples or a rank-deficient design (e.g. all
// airspeeds equal).
PolarFitResult fit_polar(std::span<const GlideSample> samples, double k);

}  // namespace soar

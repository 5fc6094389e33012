#pragma once

// Drag-polar sink model: still-air sink rate from airspeed and bank angle.

#include <cmath>
#include <stdexcept>

#include "soar/types.hpp"

namespace soar {

template <typename Scalar>
struct PolarCoefficientsT {
  Scalar c_d0{0.027};  // zero-lift drag coefficient
  Scalar b{0.031};     // induced drag coefficient
  Scalar k{25.6};      // lift-coefficient scale 2mg/(rho*A_wing), m^2/s^2
};
using PolarCoefficients = PolarCoefficientsT<double>;

// v * (c_d0/C_L + b*C_L/cos^2(bank)) with C_L = k/v^2. Positive down.
template <typename Scalar>
Scalar sink_rate(const PolarCoefficientsT<Scalar>& polar, Scalar airspeed, Scalar bank) {
  if (!(polar.c_d0 > Scalar{0} && polar.b > Scalar{0} && polar.k > Scalar{0})) {
    throw std::invalid_argument("sink_rate: polar coefficients must be > 0");
  }
  if (!(airspeed > Scalar{0})) {
    throw std::invalid_argument("sink_rate: airspeed must be > 0");
  }
  if (!(std::abs(bank) < Scalar{M_PI_2})) {
    throw std::invalid_argument("sink_rate: |bank| must be < pi/2");
  }
  const Scalar cl = polar.k / (airspeed * airspeed);
  const Scalar cos_bank = std::cos(bank);
  return airspeed * (polar.c_d0 / cl + polar.b * cl / (cos_bank * cos_bank));
}

// K = 2mg / (rho * A_wing), from airframe mass and wing geometry.
inline double compute_k(double mass, double wing_area, double rho = kAirDensitySeaLevel,
                        double g = kGravity) {
  if (!(mass > 0.0 && wing_area > 0.0 && rho > 0.0 && g > 0.0)) {
    throw std::invalid_argument("compute_k: all inputs must be > 0");
  }
  return 2.0 * mass * g / (rho * wing_area);
}

}  // namespace soar

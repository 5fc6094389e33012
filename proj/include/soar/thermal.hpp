#pragma once

// Ground-truth atmosphere: Gaussian updrafts drifting with a uniform wind.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "soar/types.hpp"

namespace soar {

// One bell-shaped updraft. strength is the vertical air speed at the core
// (negative models a sink region); radius is the e-folding length scale of
// the lift distribution.
template <typename Scalar>
struct ThermalParamsT {
  Scalar strength{0};        // m/s at the core
  Scalar radius{1};          // m, > 0
  Vec2T<Scalar> core{0, 0};  // Earth frame (north, east), m
  Scalar spawn_time{0};      // s; before this the thermal is inactive
};
using ThermalParams = ThermalParamsT<double>;

// Vertical air speed at (north, east): strength * exp(-d^2 / radius^2).
template <typename Scalar>
Scalar lift_at(const ThermalParamsT<Scalar>& thermal, Scalar north, Scalar east) {
  if (!(thermal.radius > Scalar{0})) {
    throw std::invalid_argument("ThermalParams: radius must be > 0");
  }
  const Vec2T<Scalar> d = Vec2T<Scalar>(north, east) - thermal.core;
  return thermal.strength * std::exp(-d.squaredNorm() / (thermal.radius * thermal.radius));
}

template <typename Scalar>
Scalar lift_at(const ThermalParamsT<Scalar>& thermal, const Vec2T<Scalar>& position) {
  return lift_at(thermal, position.x(), position.y());
}

// Displace the core with the wind over dt; strength and radius are unchanged.
template <typename Scalar>
ThermalParamsT<Scalar> advect(const ThermalParamsT<Scalar>& thermal,
                              const Vec2T<Scalar>& wind, Scalar dt) {
  if (dt < Scalar{0}) {
    throw std::invalid_argument("advect: dt must be >= 0");
  }
  ThermalParamsT<Scalar> out = thermal;
  out.core += wind * dt;
  return out;
}

// Superposition of all thermals in the list.
template <typename Scalar>
Scalar field_lift(std::span<const ThermalParamsT<Scalar>> thermals, Scalar north, Scalar east) {
  Scalar sum{0};
  for (const auto& thermal : thermals) {
    sum += lift_at(thermal, north, east);
  }
  return sum;
}

// Simulator-side atmosphere state. Cores are advected with the (scaled) wind
// from their spawn time; queries are pure functions of (position, time).
class ThermalField {
 public:
  ThermalField() = default;
  ThermalField(std::vector<ThermalParams> thermals, WindVector wind, double drift_factor = 1.0);

  // Total lift at `position`, counting thermals active at `time`.
  double lift(const Vec2& position, double time) const;

  // Thermals active at `time`, cores advected to their position at `time`.
  std::vector<ThermalParams> active_at(double time) const;

  const WindVector& wind() const { return wind_; }
  double drift_factor() const { return drift_factor_; }
  bool empty() const { return thermals_.empty(); }

 private:
  std::vector<ThermalParams> thermals_;
  WindVector wind_{0, 0};
  double drift_factor_{1.0};
};

}  // namespace soar

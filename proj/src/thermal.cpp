#include "soar/thermal.hpp"

#include <utility>

namespace soar {

ThermalField::ThermalField(std::vector<ThermalParams> thermals, WindVector wind,
                           double drift_factor)
    : thermals_(std::move(thermals)), wind_(std::move(wind)), drift_factor_(drift_factor) {
  for (const auto& thermal : thermals_) {
    if (!(thermal.radius > 0.0)) {
      throw std::invalid_argument("ThermalField: thermal radius must be > 0");
    }
    if (!std::isfinite(thermal.strength)) {
      throw std::invalid_argument("ThermalField: thermal strength must be finite");
    }
  }
}

double ThermalField::lift(const Vec2& position, double time) const {
  double sum = 0.0;
  for (const auto& thermal : thermals_) {
    if (time < thermal.spawn_time) {
      continue;
    }
    const Vec2 drift = wind_ * drift_factor_;
    sum += lift_at(advect(thermal, drift, time - thermal.spawn_time), position);
  }
  return sum;
}

std::vector<ThermalParams> ThermalField::active_at(double time) const {
  std::vector<ThermalParams> out;
  for (const auto& thermal : thermals_) {
    if (time < thermal.spawn_time) {
      continue;
    }
    const Vec2 drift = wind_ * drift_factor_;
    out.push_back(advect(thermal, drift, time - thermal.spawn_time));
  }
  return out;
}

}  // namespace soar

#include "soar/glider.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace soar {

GliderState step_dynamics(const GliderState& state, const GliderCommands& commands,
                          double env_lift, const WindVector& wind,
                          const PolarCoefficients& polar, const DynamicsParams& params,
                          double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("step_dynamics: dt must be > 0");
  }
  if (!(std::abs(commands.target_bank) < M_PI_2)) {
    throw std::invalid_argument("step_dynamics: |target_bank| must be < pi/2");
  }
  if (!(commands.target_airspeed > 0.0)) {
    throw std::invalid_argument("step_dynamics: target_airspeed must be > 0");
  }
  if (!(state.airspeed > 0.0)) {
    throw std::invalid_argument("step_dynamics: state.airspeed must be > 0");
  }

  GliderState next = state;

  // Exact first-order lag: invariant under splitting dt into substeps.
  const double bank_alpha = std::exp(-dt / params.bank_tau);
  const double speed_alpha = std::exp(-dt / params.airspeed_tau);
  next.bank = commands.target_bank + (state.bank - commands.target_bank) * bank_alpha;
  next.airspeed =
      commands.target_airspeed + (state.airspeed - commands.target_airspeed) * speed_alpha;

  next.heading = wrap_angle(state.heading + params.g * std::tan(next.bank) / next.airspeed * dt);

  const Vec2 air_velocity{next.airspeed * std::cos(next.heading),
                          next.airspeed * std::sin(next.heading)};
  next.position += (air_velocity + wind) * dt;

  double altitude_rate = env_lift - sink_rate(polar, next.airspeed, next.bank);
  if (commands.motor_on) {
    altitude_rate += params.motor_climb_rate;
  }
  next.altitude = std::max(0.0, state.altitude + altitude_rate * dt);
  next.motor_on = commands.motor_on;
  next.time = state.time + dt;
  return next;
}

}  // namespace soar

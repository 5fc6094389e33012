#pragma once

// Point-mass sailplane kinematics with first-order actuator lags.

#include "soar/polar.hpp"
#include "soar/types.hpp"

namespace soar {

struct GliderState {
  Vec2 position{0, 0};   // Earth frame (north, east), m
  double altitude{0};    // m above home
  double airspeed{0};    // m/s, > 0
  double heading{0};     // rad from north, positive toward east
  double bank{0};        // rad, positive banks into a right (clockwise) turn
  bool motor_on{false};
  double time{0};        // s
};

struct GliderCommands {
  double target_bank{0};      // rad, |.| < pi/2
  double target_airspeed{0};  // m/s, > 0
  bool motor_on{false};
};

struct DynamicsParams {
  double bank_tau{0.5};          // s, first-order bank response
  double airspeed_tau{0.5};      // s, first-order airspeed response
  double motor_climb_rate{2.0};  // m/s added while the motor runs
  double g{kGravity};
};

// Advance the glider by dt. Heading rate is the coordinated-turn rate
// g*tan(bank)/v, ground velocity is air velocity plus wind, and the altitude
// rate is env_lift - sink_rate(v, bank) (+ motor climb when commanded).
GliderState step_dynamics(const GliderState& state, const GliderCommands& commands,
                          double env_lift, const WindVector& wind,
                          const PolarCoefficients& polar, const DynamicsParams& params,
                          double dt);

}  // namespace soar

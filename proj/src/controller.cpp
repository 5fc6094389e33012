#include "soar/controller.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace soar {

namespace {

// Bank below which the current turn direction is not considered established.
constexpr double kDirectionBankThreshold = 5.0 * M_PI / 180.0;

}  // namespace

const char* to_string(FlightMode mode) {
  switch (mode) {
    case FlightMode::CLIMB_POWERED:
      return "CLIMB_POWERED";
    case FlightMode::GLIDE_CRUISE:
      return "GLIDE_CRUISE";
    case FlightMode::THERMAL_LOITER:
      return "THERMAL_LOITER";
  }
  return "UNKNOWN";
}

double derived_k_sink(const PolarCoefficients& polar, double airspeed, double loiter_radius,
                      double g) {
  if (!(loiter_radius > 0.0)) {
    throw std::invalid_argument("derived_k_sink: loiter_radius must be > 0");
  }
  const double loiter_bank = std::atan(airspeed * airspeed / (g * loiter_radius));
  return sink_rate(polar, airspeed, loiter_bank);
}

double SoarConfig::resolved_k_sink() const {
  if (k_sink > 0.0) {
    return k_sink;
  }
  return derived_k_sink(polar, target_airspeed, loiter_radius);
}

bool detect(double e_dot_filt, double altitude, double time_since_exit,
            const SoarConfig& config) {
  return e_dot_filt > config.vspeed_trigger && time_since_exit >= config.min_cruise_s &&
         altitude > config.alt_min && altitude < config.alt_max;
}

bool exit_check(const EstimatorState& state, double loiter_radius, const SoarConfig& config,
                double time_in_thermal) {
  if (time_in_thermal < config.min_thermal_s) {
    return false;
  }
  const double radius_est = state.mean[1];
  const double predicted =
      state.mean[0] * std::exp(-(loiter_radius * loiter_radius) / (radius_est * radius_est));
  return predicted - config.resolved_k_sink() < config.vspeed_trigger;
}

LoiterCommand loiter_target(const EstimatorState& state, const GliderState& aircraft,
                            const SoarConfig& config, TurnDirection direction) {
  LoiterCommand command;
  command.center = aircraft.position + Vec2{state.mean[2], state.mean[3]};
  command.radius = config.loiter_radius;
  command.direction = direction;
  return command;
}

FlightMode altitude_mode_step(FlightMode mode, double altitude, const SoarConfig& config) {
  switch (mode) {
    case FlightMode::GLIDE_CRUISE:
      if (altitude <= config.alt_min) {
        return FlightMode::CLIMB_POWERED;
      }
      break;
    case FlightMode::CLIMB_POWERED:
      if (altitude >= config.alt_cutoff) {
        return FlightMode::GLIDE_CRUISE;
      }
      break;
    case FlightMode::THERMAL_LOITER:
      if (altitude >= config.alt_max) {
        return FlightMode::GLIDE_CRUISE;
      }
      if (altitude <= config.alt_min) {
        return FlightMode::CLIMB_POWERED;
      }
      break;
  }
  return mode;
}

SoarController::SoarController(SoarConfig config, Geofence fence, FlightMode initial_mode)
    : config_(config), fence_(std::move(fence)), mode_(initial_mode) {}

void SoarController::enter_thermal(const ControllerInputs& inputs) {
  estimator_ = initialize(inputs.vario.e_dot_filt, inputs.glider.heading, config_.init);
  estimator_active_ = true;
  time_in_thermal_ = 0.0;
  prev_position_ = inputs.glider.position;
  has_prev_position_ = true;
  // Keep an established turn going; default to CCW from wings level.
  if (inputs.glider.bank > kDirectionBankThreshold) {
    direction_ = TurnDirection::CW;
  } else if (inputs.glider.bank < -kDirectionBankThreshold) {
    direction_ = TurnDirection::CCW;
  } else {
    direction_ = TurnDirection::CCW;
  }
  ++encounters_;
}

void SoarController::exit_thermal() {
  estimator_active_ = false;
  has_prev_position_ = false;
  time_since_exit_ = 0.0;
}

ControllerOutputs SoarController::tick(const ControllerInputs& inputs, double dt) {
  if (!(dt > 0.0)) {
    throw std::invalid_argument("SoarController::tick: dt must be > 0");
  }

  ControllerOutputs out;
  time_since_exit_ += dt;
  if (mode_ == FlightMode::THERMAL_LOITER) {
    time_in_thermal_ += dt;
  }

  const FlightMode previous_mode = mode_;
  const double altitude = inputs.glider.altitude;

  // Altitude limits first; they dominate everything else.
  mode_ = altitude_mode_step(mode_, altitude, config_);
  if (previous_mode == FlightMode::CLIMB_POWERED && mode_ == FlightMode::GLIDE_CRUISE) {
    out.reset_vario_filter = true;
  }
  if (previous_mode == FlightMode::THERMAL_LOITER && mode_ != FlightMode::THERMAL_LOITER) {
    exit_thermal();
  }

  // Geofence: a loiter outside the fence is abandoned immediately.
  if (mode_ == FlightMode::THERMAL_LOITER && !fence_.contains(inputs.glider.position)) {
    mode_ = FlightMode::GLIDE_CRUISE;
    out.geofence_exit = true;
    exit_thermal();
  }

  const bool was_thermalling =
      previous_mode == FlightMode::THERMAL_LOITER && mode_ == FlightMode::THERMAL_LOITER;

  // Detection only from a steady glide: not on the tick the motor cut or a
  // thermal was abandoned, and never outside the fence.
  const bool may_detect = config_.enable && mode_ == FlightMode::GLIDE_CRUISE &&
                          previous_mode == FlightMode::GLIDE_CRUISE &&
                          fence_.contains(inputs.glider.position);

  if (may_detect && detect(inputs.vario.e_dot_filt, altitude, time_since_exit_, config_)) {
    mode_ = FlightMode::THERMAL_LOITER;
    enter_thermal(inputs);
    out.loiter = loiter_target(estimator_, inputs.glider, config_, direction_);
  } else if (was_thermalling) {
    // Identification runs every tick in the thermal: predict over the
    // wind-corrected displacement, then fuse the netto vario.
    const Vec2 delta_abs = inputs.glider.position - prev_position_;
    prev_position_ = inputs.glider.position;
    const Vec2 displacement = wind_corrected_displacement(delta_abs, inputs.wind, dt);
    estimator_ = predict(estimator_, displacement.x(), displacement.y(), config_.noise);

    const EkfUpdate result = update(estimator_, inputs.vario.e_dot_net, config_.noise);
    if (!result.ok) {
      mode_ = FlightMode::GLIDE_CRUISE;
      out.estimator_reset = true;
      exit_thermal();
    } else {
      estimator_ = result.state;
      out.innovation = result.innovation;
      out.gain_norm = result.gain_norm;
      if (exit_check(estimator_, config_.loiter_radius, config_, time_in_thermal_)) {
        mode_ = FlightMode::GLIDE_CRUISE;
        exit_thermal();
      } else {
        out.loiter = loiter_target(estimator_, inputs.glider, config_, direction_);
      }
    }
  }

  out.mode = mode_;
  out.motor_on = mode_ == FlightMode::CLIMB_POWERED;
  out.estimator_active = estimator_active_;
  out.estimator = estimator_;
  return out;
}

}  // namespace soar

#pragma once

// Soaring mode state machine: powered climbs between altitude bands, gliding
// cruise with thermal detection, loiter-based exploitation around the
// estimated core, and model-predicted exit.

#include <optional>

#include "soar/ekf.hpp"
#include "soar/geofence.hpp"
#include "soar/glider.hpp"
#include "soar/polar.hpp"
#include "soar/types.hpp"
#include "soar/variometer.hpp"

namespace soar {

enum class FlightMode { CLIMB_POWERED, GLIDE_CRUISE, THERMAL_LOITER };

const char* to_string(FlightMode mode);

enum class TurnDirection { CW, CCW };

struct LoiterCommand {
  Vec2 center{0, 0};  // Earth frame (north, east), m
  double radius{15};  // m, > 0
  TurnDirection direction{TurnDirection::CCW};
};

struct SoarConfig {
  bool enable{true};
  double vspeed_trigger{0.7};  // m/s, entry threshold and model exit threshold
  double alt_min{50};          // m, motor on below this
  double alt_cutoff{250};      // m, motor off above this
  double alt_max{350};         // m, thermalling terminated at this
  double loiter_radius{15};    // m, fixed thermalling radius
  double min_thermal_s{20};    // s, minimum dwell before a model exit
  double min_cruise_s{30};     // s, re-entry lockout after an exit
  double k_sink{-1};           // m/s; <= 0 derives it from the polar
  double t_c{0.03};            // detection filter constant
  NoiseConfig noise{};
  EstimatorInitConfig init{};
  PolarCoefficients polar{};
  double target_airspeed{9};   // m/s, trim speed flown in every mode

  // k_sink if set, else the polar sink at trim speed and the bank needed to
  // hold the loiter radius.
  double resolved_k_sink() const;
};

// Sink expected while circling: polar sink at the coordinated-turn bank
// atan(v^2 / (g * radius)).
double derived_k_sink(const PolarCoefficients& polar, double airspeed, double loiter_radius,
                      double g = kGravity);

// Entry test, evaluated while gliding: the filtered vario must exceed the
// trigger (strictly), the cruise lockout must have elapsed, and the altitude
// must be strictly inside (alt_min, alt_max).
bool detect(double e_dot_filt, double altitude, double time_since_exit, const SoarConfig& config);

// Model-predicted exit test, evaluated while thermalling. Uses only the
// estimated thermal, never the instantaneous vario: exit when the lift
// predicted at the loiter radius, minus circling sink, drops below the
// trigger (strictly), once the minimum dwell has elapsed.
bool exit_check(const EstimatorState& state, double loiter_radius, const SoarConfig& config,
                double time_in_thermal);

// Loiter circle centered on the estimated core, converted to the Earth frame.
LoiterCommand loiter_target(const EstimatorState& state, const GliderState& aircraft,
                            const SoarConfig& config, TurnDirection direction);

// Altitude-band transitions; these dominate every other transition.
FlightMode altitude_mode_step(FlightMode mode, double altitude, const SoarConfig& config);

struct ControllerInputs {
  GliderState glider;
  VarioSample vario;
  WindVector wind{0, 0};
};

struct ControllerOutputs {
  FlightMode mode{FlightMode::GLIDE_CRUISE};
  bool motor_on{false};
  std::optional<LoiterCommand> loiter;  // present iff mode == THERMAL_LOITER
  bool reset_vario_filter{false};       // powered climb just ended
  bool geofence_exit{false};            // loiter abandoned at the fence
  bool estimator_reset{false};          // update failed, exit forced
  bool estimator_active{false};
  EstimatorState estimator{};           // last estimate (zeros before any thermal)
  double innovation{0};
  double gain_norm{0};
};

// The mode machine. tick() is the only mutation point and must be called at
// the fixed control rate; all outputs are values.
class SoarController {
 public:
  explicit SoarController(SoarConfig config, Geofence fence = Geofence{},
                          FlightMode initial_mode = FlightMode::GLIDE_CRUISE);

  ControllerOutputs tick(const ControllerInputs& inputs, double dt);

  FlightMode mode() const { return mode_; }
  const EstimatorState& estimator() const { return estimator_; }
  bool estimator_active() const { return estimator_active_; }
  int thermal_encounters() const { return encounters_; }
  const SoarConfig& config() const { return config_; }

 private:
  void enter_thermal(const ControllerInputs& inputs);
  void exit_thermal();

  SoarConfig config_;
  Geofence fence_;
  FlightMode mode_;
  EstimatorState estimator_{};
  bool estimator_active_{false};
  TurnDirection direction_{TurnDirection::CCW};
  double time_since_exit_{0};
  double time_in_thermal_{0};
  bool has_prev_position_{false};
  Vec2 prev_position_{0, 0};
  int encounters_{0};
};

}  // namespace soar

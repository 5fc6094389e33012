#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "soar/controller.hpp"

using namespace soar;

namespace {

SoarConfig test_config() {
  SoarConfig cfg;
  cfg.vspeed_trigger = 0.7;
  cfg.alt_min = 50;
  cfg.alt_cutoff = 100;
  cfg.alt_max = 150;
  cfg.loiter_radius = 15;
  cfg.min_thermal_s = 20;
  cfg.min_cruise_s = 30;
  cfg.k_sink = 0.6;
  return cfg;
}

GliderState gliding_state(double altitude = 80.0) {
  GliderState s;
  s.position = Vec2{0, 0};
  s.altitude = altitude;
  s.airspeed = 9.0;
  s.heading = 0.0;
  return s;
}

VarioSample vario_with(double filt, double net = 0.0) {
  VarioSample v;
  v.e_dot_filt = filt;
  v.e_dot_net = net;
  return v;
}

}  // namespace

TEST_CASE("detect thresholds") {
  const SoarConfig cfg = test_config();
  // Boundary equality keeps cruising.
  CHECK_FALSE(detect(0.7, 80.0, 100.0, cfg));
  CHECK(detect(1.2, 80.0, 100.0, cfg));
  // Cruise lockout.
  CHECK_FALSE(detect(1.2, 80.0, 10.0, cfg));
  CHECK(detect(1.2, 80.0, 30.0, cfg));  // >= is enough
  // Altitude band, strict.
  CHECK_FALSE(detect(1.2, 50.0, 100.0, cfg));
  CHECK_FALSE(detect(1.2, 150.0, 100.0, cfg));
  CHECK(detect(1.2, 149.0, 100.0, cfg));
}

TEST_CASE("exit check uses the model prediction at the loiter radius") {
  const SoarConfig cfg = test_config();
  EstimatorState est;
  est.mean << 2.5, 50.0, 0.0, 0.0;

  // 2.5*exp(-225/2500) - 0.6 ~= 1.685 > 0.7: stay.
  CHECK_FALSE(exit_check(est, 15.0, cfg, 100.0));
  const double predicted = 2.5 * std::exp(-225.0 / 2500.0) - 0.6;
  CHECK(predicted == doctest::Approx(1.685).epsilon(1e-3));

  // Dead thermal: -k_sink < trigger, exit.
  est.mean[0] = 0.0;
  CHECK(exit_check(est, 15.0, cfg, 100.0));

  // Strong thermal but dwell not yet served: stay.
  est.mean[0] = 2.5;
  CHECK_FALSE(exit_check(est, 15.0, cfg, 10.0));

  // Boundary equality keeps thermalling.
  SoarConfig boundary = cfg;
  est.mean[0] = (boundary.vspeed_trigger + boundary.k_sink) / std::exp(-225.0 / 2500.0);
  CHECK_FALSE(exit_check(est, 15.0, boundary, 100.0));
}

TEST_CASE("k_sink derives from the polar at the loiter bank") {
  const PolarCoefficients polar;
  const double v = 9.0;
  const double radius = 15.0;
  const double bank = std::atan(v * v / (kGravity * radius));
  CHECK(derived_k_sink(polar, v, radius) ==
        doctest::Approx(sink_rate(polar, v, bank)).epsilon(1e-12));

  SoarConfig cfg = test_config();
  CHECK(cfg.resolved_k_sink() == doctest::Approx(0.6));
  cfg.k_sink = -1.0;
  CHECK(cfg.resolved_k_sink() == doctest::Approx(derived_k_sink(polar, 9.0, 15.0)));
}

TEST_CASE("loiter target converts the relative estimate to Earth frame") {
  const SoarConfig cfg = test_config();
  EstimatorState est;
  est.mean << 2.5, 50.0, 0.0, 0.0;
  GliderState aircraft = gliding_state();
  aircraft.position = Vec2{100, 100};

  LoiterCommand cmd = loiter_target(est, aircraft, cfg, TurnDirection::CCW);
  CHECK(cmd.center.x() == doctest::Approx(100.0));
  CHECK(cmd.center.y() == doctest::Approx(100.0));

  est.mean[2] = 30.0;
  est.mean[3] = 40.0;
  cmd = loiter_target(est, aircraft, cfg, TurnDirection::CCW);
  CHECK(cmd.center.x() == doctest::Approx(130.0));
  CHECK(cmd.center.y() == doctest::Approx(140.0));

  // Radius is the configured fixed value regardless of the estimated radius.
  est.mean[1] = 500.0;
  cmd = loiter_target(est, aircraft, cfg, TurnDirection::CCW);
  CHECK(cmd.radius == doctest::Approx(15.0));
}

TEST_CASE("altitude mode transitions") {
  const SoarConfig cfg = test_config();
  CHECK(altitude_mode_step(FlightMode::GLIDE_CRUISE, 50.0, cfg) == FlightMode::CLIMB_POWERED);
  CHECK(altitude_mode_step(FlightMode::GLIDE_CRUISE, 51.0, cfg) == FlightMode::GLIDE_CRUISE);
  CHECK(altitude_mode_step(FlightMode::CLIMB_POWERED, 100.0, cfg) == FlightMode::GLIDE_CRUISE);
  CHECK(altitude_mode_step(FlightMode::CLIMB_POWERED, 99.0, cfg) == FlightMode::CLIMB_POWERED);
  CHECK(altitude_mode_step(FlightMode::THERMAL_LOITER, 150.0, cfg) == FlightMode::GLIDE_CRUISE);
  CHECK(altitude_mode_step(FlightMode::THERMAL_LOITER, 50.0, cfg) == FlightMode::CLIMB_POWERED);
  CHECK(altitude_mode_step(FlightMode::THERMAL_LOITER, 100.0, cfg) == FlightMode::THERMAL_LOITER);
}

TEST_CASE("controller enters a thermal and tracks the estimate every tick") {
  SoarConfig cfg = test_config();
  cfg.min_cruise_s = 1.0;
  SoarController ctl(cfg);
  const double dt = 0.2;

  GliderState glider = gliding_state();
  // Below the trigger: stays gliding.
  ControllerOutputs out = ctl.tick({glider, vario_with(0.2), WindVector{0, 0}}, dt);
  CHECK(out.mode == FlightMode::GLIDE_CRUISE);
  CHECK_FALSE(out.loiter.has_value());

  // Wait out the cruise lockout, then trigger.
  for (int i = 0; i < 10; ++i) {
    out = ctl.tick({glider, vario_with(0.2), WindVector{0, 0}}, dt);
  }
  out = ctl.tick({glider, vario_with(1.2), WindVector{0, 0}}, dt);
  REQUIRE(out.mode == FlightMode::THERMAL_LOITER);
  REQUIRE(out.loiter.has_value());
  CHECK(ctl.thermal_encounters() == 1);

  // The loiter center equals aircraft position plus the relative estimate,
  // every tick.
  for (int i = 0; i < 20; ++i) {
    glider.position += Vec2{1.5, 0.3};
    out = ctl.tick({glider, vario_with(1.2, 1.6), WindVector{0, 0}}, dt);
    REQUIRE(out.mode == FlightMode::THERMAL_LOITER);
    REQUIRE(out.loiter.has_value());
    const Vec2 expected = glider.position + Vec2{out.estimator.mean[2], out.estimator.mean[3]};
    CHECK((out.loiter->center - expected).norm() == doctest::Approx(0.0));
    CHECK(out.loiter->radius == doctest::Approx(cfg.loiter_radius));
  }
}

TEST_CASE("exit uses the model, not the instantaneous vario") {
  SoarConfig cfg = test_config();
  cfg.min_cruise_s = 0.4;
  cfg.min_thermal_s = 1.0;
  SoarController ctl(cfg);
  const double dt = 0.2;
  GliderState glider = gliding_state();

  for (int i = 0; i < 3; ++i) {
    ctl.tick({glider, vario_with(0.0), WindVector{0, 0}}, dt);
  }
  ControllerOutputs out = ctl.tick({glider, vario_with(1.2), WindVector{0, 0}}, dt);
  REQUIRE(out.mode == FlightMode::THERMAL_LOITER);

  // The thermal dies (netto reads zero) but the filtered detection signal is
  // held absurdly high. The exit must come anyway, from the model collapsing
  // to nothing, and the exit tick's prediction must sit below the threshold.
  bool exited = false;
  int ticks = 0;
  while (!exited && ticks < 200) {
    out = ctl.tick({glider, vario_with(9.9, 0.0), WindVector{0, 0}}, dt);
    exited = out.mode != FlightMode::THERMAL_LOITER;
    ++ticks;
  }
  REQUIRE(exited);
  const double predicted =
      out.estimator.mean[0] * std::exp(-cfg.loiter_radius * cfg.loiter_radius /
                                       (out.estimator.mean[1] * out.estimator.mean[1]));
  CHECK(predicted - cfg.resolved_k_sink() < cfg.vspeed_trigger);

  // Converse: a strong model keeps the loiter through dead-air readings
  // before the estimate has time to decay.
  SoarController ctl2(cfg);
  for (int i = 0; i < 3; ++i) {
    ctl2.tick({glider, vario_with(0.0), WindVector{0, 0}}, dt);
  }
  out = ctl2.tick({glider, vario_with(3.0), WindVector{0, 0}}, dt);
  REQUIRE(out.mode == FlightMode::THERMAL_LOITER);
  out = ctl2.tick({glider, vario_with(-2.0, 2.8), WindVector{0, 0}}, dt);
  CHECK(out.mode == FlightMode::THERMAL_LOITER);  // low filt alone cannot exit
}

TEST_CASE("altitude limits dominate the loiter") {
  SoarConfig cfg = test_config();
  cfg.min_cruise_s = 0.4;
  cfg.min_thermal_s = 1000.0;  // dwell must NOT hold the aircraft above alt_max
  SoarController ctl(cfg);
  const double dt = 0.2;
  GliderState glider = gliding_state(120.0);

  for (int i = 0; i < 3; ++i) {
    ctl.tick({glider, vario_with(0.0), WindVector{0, 0}}, dt);
  }
  ControllerOutputs out = ctl.tick({glider, vario_with(1.2), WindVector{0, 0}}, dt);
  REQUIRE(out.mode == FlightMode::THERMAL_LOITER);

  glider.altitude = 150.0;  // reached alt_max
  out = ctl.tick({glider, vario_with(1.2, 2.0), WindVector{0, 0}}, dt);
  CHECK(out.mode == FlightMode::GLIDE_CRUISE);
  CHECK_FALSE(out.loiter.has_value());

  // And alt_min forces the motor on from a loiter.
  SoarController ctl2(cfg);
  glider = gliding_state(80.0);
  for (int i = 0; i < 3; ++i) {
    ctl2.tick({glider, vario_with(0.0), WindVector{0, 0}}, dt);
  }
  out = ctl2.tick({glider, vario_with(1.2), WindVector{0, 0}}, dt);
  REQUIRE(out.mode == FlightMode::THERMAL_LOITER);
  glider.altitude = 49.0;
  out = ctl2.tick({glider, vario_with(1.2, 2.0), WindVector{0, 0}}, dt);
  CHECK(out.mode == FlightMode::CLIMB_POWERED);
  CHECK(out.motor_on);
}

TEST_CASE("geofence breach forces a cruise exit") {
  SoarConfig cfg = test_config();
  cfg.min_cruise_s = 0.4;
  const Geofence fence({Vec2{-100, -100}, Vec2{100, -100}, Vec2{100, 100}, Vec2{-100, 100}});
  SoarController ctl(cfg, fence);
  const double dt = 0.2;
  GliderState glider = gliding_state();

  for (int i = 0; i < 3; ++i) {
    ctl.tick({glider, vario_with(0.0), WindVector{0, 0}}, dt);
  }
  ControllerOutputs out = ctl.tick({glider, vario_with(1.2), WindVector{0, 0}}, dt);
  REQUIRE(out.mode == FlightMode::THERMAL_LOITER);

  glider.position = Vec2{150, 0};  // outside
  out = ctl.tick({glider, vario_with(1.2, 2.0), WindVector{0, 0}}, dt);
  CHECK(out.mode == FlightMode::GLIDE_CRUISE);
  CHECK(out.geofence_exit);

  // Detection stays blocked while outside the fence even after the lockout.
  for (int i = 0; i < 10; ++i) {
    out = ctl.tick({glider, vario_with(5.0), WindVector{0, 0}}, dt);
    CHECK(out.mode == FlightMode::GLIDE_CRUISE);
  }
}

TEST_CASE("estimator failure forces an exit") {
  SoarConfig cfg = test_config();
  cfg.min_cruise_s = 0.4;
  SoarController ctl(cfg);
  const double dt = 0.2;
  GliderState glider = gliding_state();

  for (int i = 0; i < 3; ++i) {
    ctl.tick({glider, vario_with(0.0), WindVector{0, 0}}, dt);
  }
  ControllerOutputs out = ctl.tick({glider, vario_with(1.2), WindVector{0, 0}}, dt);
  REQUIRE(out.mode == FlightMode::THERMAL_LOITER);

  // A corrupted observation poisons the mean; the next update must abort and
  // the controller must fall back to cruising.
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out = ctl.tick({glider, vario_with(1.2, nan), WindVector{0, 0}}, dt);
  bool reset_seen = out.estimator_reset;
  for (int i = 0; i < 5 && !reset_seen; ++i) {
    out = ctl.tick({glider, vario_with(1.2, 1.0), WindVector{0, 0}}, dt);
    reset_seen = out.estimator_reset;
  }
  CHECK(reset_seen);
  CHECK(out.mode == FlightMode::GLIDE_CRUISE);
}

TEST_CASE("hysteresis: no fast oscillation between glide and loiter") {
  SoarConfig cfg = test_config();
  cfg.min_cruise_s = 4.0;
  cfg.min_thermal_s = 4.0;
  SoarController ctl(cfg);
  const double dt = 0.2;
  GliderState glider = gliding_state();

  double last_enter = -1e9;
  double last_exit = -1e9;
  FlightMode prev = FlightMode::GLIDE_CRUISE;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> filt(-1.0, 3.0);

  for (int k = 0; k < 20000; ++k) {
    const double t = k * dt;
    // Noisy vario, weak model: lots of enter/exit pressure.
    const ControllerOutputs out =
        ctl.tick({glider, vario_with(filt(rng), filt(rng)), WindVector{0, 0}}, dt);
    if (prev != FlightMode::THERMAL_LOITER && out.mode == FlightMode::THERMAL_LOITER) {
      CHECK(t - last_exit >= cfg.min_cruise_s - dt - 1e-9);
      last_enter = t;
    }
    if (prev == FlightMode::THERMAL_LOITER && out.mode != FlightMode::THERMAL_LOITER) {
      CHECK(t - last_enter >= cfg.min_thermal_s - dt - 1e-9);
      last_exit = t;
    }
    prev = out.mode;
  }
}

TEST_CASE("mode graph is closed and the motor follows the mode") {
  SoarConfig cfg = test_config();
  cfg.min_cruise_s = 1.0;
  cfg.min_thermal_s = 1.0;
  SoarController ctl(cfg);
  const double dt = 0.2;

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> alt(0.0, 200.0);
  std::uniform_real_distribution<double> vario(-3.0, 3.0);
  std::uniform_real_distribution<double> pos(-50.0, 50.0);

  for (int i = 0; i < 100000; ++i) {
    GliderState glider = gliding_state(alt(rng));
    glider.position = Vec2{pos(rng), pos(rng)};
    const ControllerOutputs out =
        ctl.tick({glider, vario_with(vario(rng), vario(rng)), WindVector{0, 0}}, dt);
    const bool defined = out.mode == FlightMode::CLIMB_POWERED ||
                         out.mode == FlightMode::GLIDE_CRUISE ||
                         out.mode == FlightMode::THERMAL_LOITER;
    REQUIRE(defined);
    REQUIRE(out.motor_on == (out.mode == FlightMode::CLIMB_POWERED));
    REQUIRE(out.loiter.has_value() == (out.mode == FlightMode::THERMAL_LOITER));
  }
}

TEST_CASE("disabled controller still manages the altitude band") {
  SoarConfig cfg = test_config();
  cfg.enable = false;
  cfg.min_cruise_s = 0.4;
  SoarController ctl(cfg);
  const double dt = 0.2;

  GliderState glider = gliding_state(80.0);
  for (int i = 0; i < 5; ++i) {
    const ControllerOutputs out = ctl.tick({glider, vario_with(5.0), WindVector{0, 0}}, dt);
    CHECK(out.mode == FlightMode::GLIDE_CRUISE);  // never thermals
  }
  glider.altitude = 50.0;
  const ControllerOutputs out = ctl.tick({glider, vario_with(5.0), WindVector{0, 0}}, dt);
  CHECK(out.mode == FlightMode::CLIMB_POWERED);
}

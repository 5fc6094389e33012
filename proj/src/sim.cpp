#include "soar/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "soar/geofence.hpp"
#include "soar/thermal.hpp"
#include "soar/variometer.hpp"

namespace soar {

namespace {

constexpr double kCruiseHeadingGain = 1.2;   // rad bank per rad heading error
constexpr double kLoiterHeadingGain = 2.0;   // rad bank per rad heading error
constexpr double kLoiterRadialGain = 0.8;    // 1/s, radial error to crossing speed

double clamp_bank(double bank) {
  return std::clamp(bank, -kMaxBank, kMaxBank);
}

}  // namespace

std::size_t update_waypoint_index(const GliderState& state, std::span<const Vec2> waypoints,
                                  std::size_t current) {
  if (waypoints.empty()) {
    throw std::invalid_argument("update_waypoint_index: no waypoints");
  }
  current %= waypoints.size();
  if ((waypoints[current] - state.position).norm() <= kWaypointAcceptRadius) {
    current = (current + 1) % waypoints.size();
  }
  return current;
}

double cruise_navigation(const GliderState& state, std::span<const Vec2> waypoints,
                         std::size_t current) {
  if (current >= waypoints.size()) {
    throw std::invalid_argument("cruise_navigation: waypoint index out of range");
  }
  const Vec2 to_target = waypoints[current] - state.position;
  if (to_target.norm() < 1e-9) {
    return 0.0;
  }
  const double bearing = std::atan2(to_target.y(), to_target.x());
  const double heading_error = wrap_angle(bearing - state.heading);
  return clamp_bank(kCruiseHeadingGain * heading_error);
}

double loiter_tracking(const GliderState& state, const LoiterCommand& command, double g) {
  if (!(command.radius > 0.0)) {
    throw std::invalid_argument("loiter_tracking: radius must be > 0");
  }
  const double sign = command.direction == TurnDirection::CW ? 1.0 : -1.0;

  const Vec2 radial = state.position - command.center;
  const double range = radial.norm();
  // Near the center the bearing is undefined; treat the current heading as
  // the tangent so the radial term steers outward without a singularity.
  double bearing_from_center;
  if (range < 1e-6) {
    bearing_from_center = state.heading - sign * M_PI_2;
  } else {
    bearing_from_center = std::atan2(radial.y(), radial.x());
  }

  const double tangent_heading = bearing_from_center + sign * M_PI_2;
  const double radial_error = range - command.radius;  // > 0: outside the circle
  const double correction =
      std::clamp(std::atan2(kLoiterRadialGain * radial_error, state.airspeed), -M_PI / 3,
                 M_PI / 3);
  const double desired_heading = tangent_heading + sign * correction;
  const double heading_error = wrap_angle(desired_heading - state.heading);

  const double feedforward =
      sign * std::atan(state.airspeed * state.airspeed / (g * command.radius));
  return clamp_bank(feedforward + kLoiterHeadingGain * heading_error);
}

namespace {

class TelemetryWriter {
 public:
  explicit TelemetryWriter(std::ostream& out) : out_(out) {
    out_ << "time,north,east,altitude,airspeed,heading,bank,mode,motor,"
            "e_dot,e_dot_net,e_dot_filt,true_lift,ekf_active,ekf_strength,ekf_radius,"
            "ekf_x,ekf_y,cov_w,cov_r,cov_x,cov_y,innovation,gain_norm,"
            "loiter_north,loiter_east,center_error\n";
  }

  void row(double time, const GliderState& g, const VarioSample& vario, double true_lift,
           const ControllerOutputs& out, double center_error) {
    char buf[768];
    const auto& est = out.estimator;
    const Vec2 loiter_center = out.loiter ? out.loiter->center : Vec2{0, 0};
    std::snprintf(buf, sizeof(buf),
                  "%.3f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%s,%d,"
                  "%.6f,%.6f,%.6f,%.6f,%d,%.6f,%.6f,%.6f,%.6f,"
                  "%.6g,%.6g,%.6g,%.6g,%.6g,%.6g,%.6f,%.6f,%.6f\n",
                  time, g.position.x(), g.position.y(), g.altitude, g.airspeed, g.heading,
                  g.bank, to_string(out.mode), out.motor_on ? 1 : 0, vario.e_dot,
                  vario.e_dot_net, vario.e_dot_filt, true_lift, out.estimator_active ? 1 : 0,
                  est.mean[0], est.mean[1], est.mean[2], est.mean[3], est.cov(0, 0),
                  est.cov(1, 1), est.cov(2, 2), est.cov(3, 3), out.innovation, out.gain_norm,
                  loiter_center.x(), loiter_center.y(), center_error);
    out_ << buf;
  }

 private:
  std::ostream& out_;
};

std::size_t nearest_waypoint(const GliderState& state, std::span<const Vec2> waypoints) {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    const double d = (waypoints[i] - state.position).norm();
    if (d < best_dist) {
      best_dist = d;
      best = i;
    }
  }
  return best;
}

double nearest_core_error(const ThermalField& env, const GliderState& glider,
                          const EstimatorState& est, double time) {
  const Vec2 estimated_center = glider.position + Vec2{est.mean[2], est.mean[3]};
  double best = std::numeric_limits<double>::quiet_NaN();
  for (const auto& thermal : env.active_at(time)) {
    const double d = (thermal.core - estimated_center).norm();
    if (std::isnan(best) || d < best) {
      best = d;
    }
  }
  return std::isnan(best) ? 0.0 : best;
}

}  // namespace

RunMetrics run(const Scenario& scenario, std::ostream& telemetry) {
  scenario.validate();

  const double dt = 1.0 / scenario.tick_rate;
  const int n_ticks = static_cast<int>(std::llround(scenario.duration * scenario.tick_rate));
  const ThermalField env(scenario.thermals, scenario.wind, scenario.thermal_drift_factor);

  SoarConfig config = scenario.soar;
  config.k_sink = config.resolved_k_sink();  // pin it once for the whole run

  Geofence fence =
      scenario.fence_vertices.empty() ? Geofence{} : Geofence{scenario.fence_vertices};

  GliderState glider = scenario.initial_state;
  glider.time = 0.0;
  const FlightMode initial_mode = glider.altitude <= config.alt_min
                                      ? FlightMode::CLIMB_POWERED
                                      : FlightMode::GLIDE_CRUISE;
  SoarController controller(config, fence, initial_mode);
  Variometer vario(config.polar, config.t_c);

  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> noise_dist(0.0, scenario.vario_noise_std > 0.0
                                                       ? scenario.vario_noise_std
                                                       : 1.0);

  TelemetryWriter writer(telemetry);
  RunMetrics metrics;
  metrics.thermal_encounters = 0;

  std::size_t waypoint_index = 0;
  FlightMode last_mode = initial_mode;
  bool in_loiter = false;
  LoiterSegment segment;

  for (int k = 0; k < n_ticks; ++k) {
    const double t = k * dt;
    glider.time = t;

    const double noise =
        scenario.vario_noise_std > 0.0 ? noise_dist(rng) : 0.0;
    const VarioSample sample = vario.step(glider.altitude, glider.airspeed, glider.bank, t,
                                          noise);

    const ControllerOutputs out = controller.tick({glider, sample, env.wind()}, dt);
    if (out.reset_vario_filter) {
      vario.reset_filter(0.0);
    }
    if (out.geofence_exit) {
      waypoint_index = nearest_waypoint(glider, scenario.waypoints);
    }

    double target_bank = 0.0;
    if (out.mode == FlightMode::THERMAL_LOITER && out.loiter) {
      target_bank = loiter_tracking(glider, *out.loiter);
    } else {
      waypoint_index = update_waypoint_index(glider, scenario.waypoints, waypoint_index);
      target_bank = cruise_navigation(glider, scenario.waypoints, waypoint_index);
    }
    const GliderCommands commands{target_bank, config.target_airspeed, out.motor_on};

    // Bookkeeping before physics: the tick's mode owns the coming interval.
    const double center_error =
        out.estimator_active ? nearest_core_error(env, glider, out.estimator, t) : 0.0;
    writer.row(t, glider, sample, env.lift(glider.position, t), out, center_error);

    if (out.mode != last_mode) {
      metrics.transitions.push_back({t, last_mode, out.mode});
    }
    if (out.mode == FlightMode::THERMAL_LOITER && !in_loiter) {
      in_loiter = true;
      segment = {t, t, glider.altitude, glider.altitude};
    } else if (out.mode != FlightMode::THERMAL_LOITER && in_loiter) {
      in_loiter = false;
      segment.exit_time = t;
      segment.exit_altitude = glider.altitude;
      metrics.loiter_segments.push_back(segment);
    }
    if (out.estimator_active) {
      metrics.center_error.emplace_back(t, center_error);
    }

    metrics.time_in_mode[static_cast<std::size_t>(out.mode)] += dt;
    if (out.motor_on) {
      metrics.motor_on_time += dt;
    }

    const double altitude_before = glider.altitude;
    const double sub_dt = dt / scenario.physics_substeps;
    for (int s = 0; s < scenario.physics_substeps; ++s) {
      const double lift = env.lift(glider.position, glider.time);
      glider = step_dynamics(glider, commands, lift, env.wind(), config.polar,
                             scenario.dynamics, sub_dt);
    }

    if (out.mode == FlightMode::THERMAL_LOITER) {
      metrics.climb_in_loiter += glider.altitude - altitude_before;
    }
    last_mode = out.mode;
  }

  if (in_loiter) {
    segment.exit_time = n_ticks * dt;
    segment.exit_altitude = glider.altitude;
    metrics.loiter_segments.push_back(segment);
  }

  metrics.duration = n_ticks * dt;
  metrics.thermal_encounters = controller.thermal_encounters();
  const double loiter_time = metrics.time_in(FlightMode::THERMAL_LOITER);
  metrics.mean_thermal_climb_rate = loiter_time > 0.0 ? metrics.climb_in_loiter / loiter_time
                                                      : 0.0;
  return metrics;
}

RunMetrics run(const Scenario& scenario, const std::string& telemetry_path) {
  std::ofstream out(telemetry_path);
  if (!out) {
    throw std::runtime_error("run: cannot open telemetry path '" + telemetry_path + "'");
  }
  return run(scenario, out);
}

void write_metrics(const RunMetrics& metrics, std::ostream& out) {
  char buf[160];
  auto line = [&](const char* key, double value) {
    std::snprintf(buf, sizeof(buf), "%-28s %.6f\n", key, value);
    out << buf;
  };
  line("DURATION_S", metrics.duration);
  line("TIME_CLIMB_POWERED_S", metrics.time_in(FlightMode::CLIMB_POWERED));
  line("TIME_GLIDE_CRUISE_S", metrics.time_in(FlightMode::GLIDE_CRUISE));
  line("TIME_THERMAL_LOITER_S", metrics.time_in(FlightMode::THERMAL_LOITER));
  line("MOTOR_ON_S", metrics.motor_on_time);
  line("CLIMB_IN_LOITER_M", metrics.climb_in_loiter);
  line("MEAN_THERMAL_CLIMB_MS", metrics.mean_thermal_climb_rate);
  std::snprintf(buf, sizeof(buf), "%-28s %d\n", "THERMAL_ENCOUNTERS", metrics.thermal_encounters);
  out << buf;
  for (const auto& tr : metrics.transitions) {
    std::snprintf(buf, sizeof(buf), "MODE_TRANSITION %.3f %s %s\n", tr.time,
                  to_string(tr.from), to_string(tr.to));
    out << buf;
  }
  for (const auto& seg : metrics.loiter_segments) {
    std::snprintf(buf, sizeof(buf), "LOITER_SEGMENT %.3f %.3f %.3f %.3f\n", seg.enter_time,
                  seg.exit_time, seg.enter_altitude, seg.exit_altitude);
    out << buf;
  }
}

double measure_loiter_climb_rate(double thermal_radius, double strength, double loiter_radius,
                                 const PolarCoefficients& polar, double airspeed,
                                 const DynamicsParams& dynamics) {
  if (!(thermal_radius > 0.0) || !(loiter_radius > 0.0) || !(airspeed > 0.0)) {
    throw std::invalid_argument("measure_loiter_climb_rate: radii and airspeed must be > 0");
  }

  const ThermalField env({ThermalParams{strength, thermal_radius, Vec2{0, 0}, 0.0}},
                         WindVector{0, 0});
  const LoiterCommand command{Vec2{0, 0}, loiter_radius, TurnDirection::CW};

  // Start on the circle, flying the tangent at the coordinated bank.
  GliderState glider;
  glider.position = Vec2{loiter_radius, 0};
  glider.altitude = 2000.0;
  glider.airspeed = airspeed;
  glider.heading = M_PI_2;
  glider.bank = std::atan(airspeed * airspeed / (dynamics.g * loiter_radius));

  const double period = 2.0 * M_PI * loiter_radius / airspeed;
  const double dt = 0.05;
  const double settle = period;
  const double measure = 2.0 * period;

  double t = 0.0;
  double altitude_at_settle = 0.0;
  while (t < settle + measure) {
    const GliderCommands commands{loiter_tracking(glider, command, dynamics.g), airspeed,
                                  false};
    const double lift = env.lift(glider.position, t);
    glider = step_dynamics(glider, commands, lift, env.wind(), polar, dynamics, dt);
    t += dt;
    if (t >= settle && altitude_at_settle == 0.0) {
      altitude_at_settle = glider.altitude;
    }
  }
  return (glider.altitude - altitude_at_settle) / measure;
}

SweepResult radius_sweep(std::span<const double> thermal_radii,
                         std::span<const double> loiter_radii, double strength,
                         const PolarCoefficients& polar, double airspeed) {
  if (thermal_radii.empty() || loiter_radii.empty()) {
    throw std::invalid_argument("radius_sweep: radius lists must be non-empty");
  }

  SweepResult result;
  result.thermal_radii.assign(thermal_radii.begin(), thermal_radii.end());
  result.loiter_radii.assign(loiter_radii.begin(), loiter_radii.end());

  // Scan grid for the optimum: a fixed spread plus every fixed radius.
  result.scan_grid = {10, 12, 15, 18, 22, 26, 30, 40, 50, 60, 80};
  for (double r : loiter_radii) {
    if (std::find(result.scan_grid.begin(), result.scan_grid.end(), r) ==
        result.scan_grid.end()) {
      result.scan_grid.push_back(r);
    }
  }
  std::sort(result.scan_grid.begin(), result.scan_grid.end());

  for (double r_th : thermal_radii) {
    for (double r_loiter : loiter_radii) {
      result.fixed.push_back(
          {r_th, r_loiter,
           measure_loiter_climb_rate(r_th, strength, r_loiter, polar, airspeed)});
    }
    SweepEntry best{r_th, 0, -std::numeric_limits<double>::max()};
    for (double r_loiter : result.scan_grid) {
      const double rate = measure_loiter_climb_rate(r_th, strength, r_loiter, polar, airspeed);
      if (rate > best.climb_rate) {
        best.climb_rate = rate;
        best.loiter_radius = r_loiter;
      }
    }
    result.best.push_back(best);
  }
  return result;
}

void write_sweep_table(const SweepResult& result, std::ostream& out) {
  char buf[160];
  out << "thermal_radius,loiter_radius,climb_rate,is_optimal\n";
  for (const auto& entry : result.fixed) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.6f,0\n", entry.thermal_radius,
                  entry.loiter_radius, entry.climb_rate);
    out << buf;
  }
  for (const auto& entry : result.best) {
    std::snprintf(buf, sizeof(buf), "%.3f,%.3f,%.6f,1\n", entry.thermal_radius,
                  entry.loiter_radius, entry.climb_rate);
    out << buf;
  }
}

}  // namespace soar

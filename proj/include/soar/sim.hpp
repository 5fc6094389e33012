#pragma once

// Deterministic scenario runner: fixed-rate loop wiring the environment,
// glider dynamics, variometer, and soaring controller, with waypoint cruise
// navigation, loiter tracking, CSV telemetry, and the loiter-radius sweep.

#include <array>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "soar/controller.hpp"
#include "soar/scenario.hpp"

namespace soar {

struct ModeTransition {
  double time{0};
  FlightMode from{FlightMode::GLIDE_CRUISE};
  FlightMode to{FlightMode::GLIDE_CRUISE};
};

struct LoiterSegment {
  double enter_time{0};
  double exit_time{0};
  double enter_altitude{0};
  double exit_altitude{0};
};

struct RunMetrics {
  double duration{0};                      // s actually simulated
  std::array<double, 3> time_in_mode{};    // s, indexed by FlightMode
  double motor_on_time{0};                 // s
  double climb_in_loiter{0};               // m, net altitude change while thermalling
  double mean_thermal_climb_rate{0};       // m/s
  int thermal_encounters{0};
  std::vector<ModeTransition> transitions;
  std::vector<LoiterSegment> loiter_segments;
  // (time, |estimated center - true core|) per thermalling tick.
  std::vector<std::pair<double, double>> center_error;

  double time_in(FlightMode mode) const {
    return time_in_mode[static_cast<std::size_t>(mode)];
  }
};

inline constexpr double kWaypointAcceptRadius = 20.0;  // m
inline constexpr double kMaxBank = 40.0 * M_PI / 180.0;

// Advance past any waypoint captured within the acceptance radius (cyclic).
std::size_t update_waypoint_index(const GliderState& state, std::span<const Vec2> waypoints,
                                  std::size_t current);

// Proportional heading-error steering toward the active waypoint.
double cruise_navigation(const GliderState& state, std::span<const Vec2> waypoints,
                         std::size_t current);

// Bank command steering onto the commanded circle: coordinated-turn
// feedforward plus proportional corrections on radial error and heading.
double loiter_tracking(const GliderState& state, const LoiterCommand& command,
                       double g = kGravity);

// Run the scenario, appending one telemetry row per control tick.
// Byte-identical output for identical scenario + seed.
RunMetrics run(const Scenario& scenario, std::ostream& telemetry);
RunMetrics run(const Scenario& scenario, const std::string& telemetry_path);

// Key-value summary of a run, scenario-style syntax.
void write_metrics(const RunMetrics& metrics, std::ostream& out);

struct SweepEntry {
  double thermal_radius{0};
  double loiter_radius{0};
  double climb_rate{0};  // m/s measured over the settled orbit
};

struct SweepResult {
  std::vector<double> thermal_radii;
  std::vector<double> loiter_radii;      // the fixed radii under comparison
  std::vector<SweepEntry> fixed;         // one row per (thermal, fixed loiter) pair
  std::vector<SweepEntry> best;          // per thermal radius, argmax over the scan grid
  std::vector<double> scan_grid;
};

// Measure the net climb rate of a loiter of `loiter_radius` centered on a
// thermal of the given radius and strength (settle one orbit, average two).
double measure_loiter_climb_rate(double thermal_radius, double strength, double loiter_radius,
                                 const PolarCoefficients& polar, double airspeed,
                                 const DynamicsParams& dynamics = {});

// Climb-rate table over thermal radii for each fixed loiter radius, plus the
// per-thermal-radius optimum found by scanning a radius grid that includes
// the fixed radii.
SweepResult radius_sweep(std::span<const double> thermal_radii,
                         std::span<const double> loiter_radii, double strength,
                         const PolarCoefficients& polar = {}, double airspeed = 9.0);

void write_sweep_table(const SweepResult& result, std::ostream& out);

}  // namespace soar

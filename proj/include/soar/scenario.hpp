#pragma once

// Scenario files: a line-oriented KEY VALUE... format shared by the runner
// and the fit tool. '#' starts a comment; THERMAL / WAYPOINT / FENCE lines
// may repeat. Controller keys use the flight-parameter names (SOAR_*,
// WP_LOITER_RAD).

#include <iosfwd>
#include <string>
#include <vector>

#include "soar/controller.hpp"
#include "soar/glider.hpp"
#include "soar/thermal.hpp"
#include "soar/types.hpp"

namespace soar {

struct Scenario {
  double duration{600};       // s
  double tick_rate{5};        // Hz
  int physics_substeps{4};    // dynamics steps per control tick
  unsigned long seed{0};
  double vario_noise_std{0};  // m/s, Gaussian on e_dot_net
  WindVector wind{0, 0};
  double thermal_drift_factor{1.0};
  std::vector<ThermalParams> thermals;
  std::vector<Vec2> waypoints;
  std::vector<Vec2> fence_vertices;  // empty: no fence
  SoarConfig soar{};
  GliderState initial_state{.position = {0, 0}, .altitude = 100, .airspeed = 9};
  DynamicsParams dynamics{};

  static Scenario parse(std::istream& in);
  static Scenario load(const std::string& path);

  // Throws std::invalid_argument naming every offending field.
  void validate() const;
};

// One "KEY value" line in scenario syntax, e.g. for emitting fitted polar
// coefficients.
std::string format_scenario_entry(const std::string& key, double value);

}  // namespace soar

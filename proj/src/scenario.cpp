#include "soar/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "soar/geofence.hpp"

namespace soar {

namespace {

double parse_double(const std::string& token, const std::string& key, int line_no) {
  std::size_t consumed = 0;
  double value = 0;
  try {
    value = std::stod(token, &consumed);
  } catch (const std::exception&) {
    consumed = 0;
  }
  if (consumed != token.size()) {
    throw std::invalid_argument("scenario line " + std::to_string(line_no) + ": " + key +
                                ": bad number '" + token + "'");
  }
  return value;
}

}  // namespace

Scenario Scenario::parse(std::istream& in) {
  Scenario sc;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream tokens(line);
    std::string key;
    if (!(tokens >> key)) {
      continue;  // blank or comment-only line
    }
    std::vector<std::string> values;
    for (std::string tok; tokens >> tok;) {
      values.push_back(tok);
    }

    auto want = [&](std::size_t n) {
      if (values.size() != n) {
        throw std::invalid_argument("scenario line " + std::to_string(line_no) + ": " + key +
                                    " expects " + std::to_string(n) + " value(s)");
      }
    };
    auto num = [&](std::size_t i) { return parse_double(values.at(i), key, line_no); };
    auto one = [&]() {
      want(1);
      return num(0);
    };

    if (key == "DURATION_S") {
      sc.duration = one();
    } else if (key == "TICK_RATE_HZ") {
      sc.tick_rate = one();
    } else if (key == "PHYSICS_SUBSTEPS") {
      sc.physics_substeps = static_cast<int>(one());
    } else if (key == "SEED") {
      sc.seed = static_cast<unsigned long>(one());
    } else if (key == "VARIO_NOISE_STD") {
      sc.vario_noise_std = one();
    } else if (key == "WIND_N") {
      sc.wind.x() = one();
    } else if (key == "WIND_E") {
      sc.wind.y() = one();
    } else if (key == "THERMAL_DRIFT_FACTOR") {
      sc.thermal_drift_factor = one();
    } else if (key == "THERMAL") {
      if (values.size() != 4 && values.size() != 5) {
        throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                    ": THERMAL expects strength radius north east [spawn_time]");
      }
      ThermalParams th;
      th.strength = num(0);
      th.radius = num(1);
      th.core = Vec2{num(2), num(3)};
      th.spawn_time = values.size() == 5 ? num(4) : 0.0;
      sc.thermals.push_back(th);
    } else if (key == "WAYPOINT") {
      want(2);
      sc.waypoints.emplace_back(num(0), num(1));
    } else if (key == "FENCE") {
      want(2);
      sc.fence_vertices.emplace_back(num(0), num(1));
    } else if (key == "SOAR_ENABLE") {
      sc.soar.enable = one() != 0.0;
    } else if (key == "SOAR_VSPEED") {
      sc.soar.vspeed_trigger = one();
    } else if (key == "SOAR_ALT_MIN") {
      sc.soar.alt_min = one();
    } else if (key == "SOAR_ALT_CUTOFF") {
      sc.soar.alt_cutoff = one();
    } else if (key == "SOAR_ALT_MAX") {
      sc.soar.alt_max = one();
    } else if (key == "WP_LOITER_RAD") {
      sc.soar.loiter_radius = one();
    } else if (key == "SOAR_MIN_THML_S") {
      sc.soar.min_thermal_s = one();
    } else if (key == "SOAR_MIN_CRSE_S") {
      sc.soar.min_cruise_s = one();
    } else if (key == "SOAR_KSINK") {
      sc.soar.k_sink = one();
    } else if (key == "SOAR_TC") {
      sc.soar.t_c = one();
    } else if (key == "SOAR_Q1") {
      sc.soar.noise.q1 = one();
    } else if (key == "SOAR_Q2") {
      sc.soar.noise.q2 = one();
    } else if (key == "SOAR_R") {
      sc.soar.noise.r = one();
    } else if (key == "SOAR_DIST_AHEAD") {
      sc.soar.init.d_ahead = one();
      sc.soar.init.sigma_position = sc.soar.init.d_ahead;
    } else if (key == "SOAR_POLAR_CD0") {
      sc.soar.polar.c_d0 = one();
    } else if (key == "SOAR_POLAR_B") {
      sc.soar.polar.b = one();
    } else if (key == "SOAR_POLAR_K") {
      sc.soar.polar.k = one();
    } else if (key == "TARGET_AIRSPEED") {
      sc.soar.target_airspeed = one();
    } else if (key == "START_NORTH") {
      sc.initial_state.position.x() = one();
    } else if (key == "START_EAST") {
      sc.initial_state.position.y() = one();
    } else if (key == "START_ALT") {
      sc.initial_state.altitude = one();
    } else if (key == "START_SPEED") {
      sc.initial_state.airspeed = one();
    } else if (key == "START_HEADING_DEG") {
      sc.initial_state.heading = one() * M_PI / 180.0;
    } else if (key == "START_BANK_DEG") {
      sc.initial_state.bank = one() * M_PI / 180.0;
    } else if (key == "MOTOR_CLIMB_RATE") {
      sc.dynamics.motor_climb_rate = one();
    } else if (key == "BANK_TAU") {
      sc.dynamics.bank_tau = one();
    } else if (key == "AIRSPEED_TAU") {
      sc.dynamics.airspeed_tau = one();
    } else {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) +
                                  ": unknown key '" + key + "'");
    }
  }
  return sc;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("scenario: cannot open '" + path + "'");
  }
  return parse(in);
}

void Scenario::validate() const {
  std::vector<std::string> errors;
  auto require = [&](bool ok, const std::string& message) {
    if (!ok) {
      errors.push_back(message);
    }
  };

  require(duration > 0, "DURATION_S must be > 0");
  require(tick_rate > 0, "TICK_RATE_HZ must be > 0");
  require(physics_substeps >= 1, "PHYSICS_SUBSTEPS must be >= 1");
  require(vario_noise_std >= 0, "VARIO_NOISE_STD must be >= 0");
  require(std::isfinite(wind.x()) && std::isfinite(wind.y()), "WIND_N/WIND_E must be finite");
  require(!waypoints.empty(), "WAYPOINT: at least one waypoint is required");

  for (std::size_t i = 0; i < thermals.size(); ++i) {
    require(thermals[i].radius > 0, "THERMAL " + std::to_string(i) + ": radius must be > 0");
    require(std::isfinite(thermals[i].strength),
            "THERMAL " + std::to_string(i) + ": strength must be finite");
  }

  require(soar.alt_min < soar.alt_cutoff && soar.alt_cutoff < soar.alt_max,
          "SOAR_ALT_MIN < SOAR_ALT_CUTOFF < SOAR_ALT_MAX must hold");
  require(soar.loiter_radius > 0, "WP_LOITER_RAD must be > 0");
  require(soar.min_thermal_s >= 0, "SOAR_MIN_THML_S must be >= 0");
  require(soar.min_cruise_s >= 0, "SOAR_MIN_CRSE_S must be >= 0");
  require(soar.noise.q1 > 0, "SOAR_Q1 must be > 0");
  require(soar.noise.q2 > 0, "SOAR_Q2 must be > 0");
  require(soar.noise.r > 0, "SOAR_R must be > 0");
  require(soar.t_c > 0 && soar.t_c <= 1, "SOAR_TC must be in (0, 1]");
  require(soar.polar.c_d0 > 0, "SOAR_POLAR_CD0 must be > 0");
  require(soar.polar.b > 0, "SOAR_POLAR_B must be > 0");
  require(soar.polar.k > 0, "SOAR_POLAR_K must be > 0");
  require(soar.target_airspeed > 0, "TARGET_AIRSPEED must be > 0");
  require(initial_state.airspeed > 0, "START_SPEED must be > 0");
  require(initial_state.altitude >= 0, "START_ALT must be >= 0");
  require(dynamics.bank_tau > 0, "BANK_TAU must be > 0");
  require(dynamics.airspeed_tau > 0, "AIRSPEED_TAU must be > 0");

  if (!fence_vertices.empty()) {
    if (fence_vertices.size() < 3) {
      errors.push_back("FENCE: need at least 3 vertices");
    } else {
      try {
        const Geofence fence(fence_vertices);
        for (std::size_t i = 0; i < waypoints.size(); ++i) {
          require(fence.contains(waypoints[i]),
                  "WAYPOINT " + std::to_string(i) + ": outside the geofence");
        }
      } catch (const std::invalid_argument& e) {
        errors.push_back(std::string("FENCE: ") + e.what());
      }
    }
  }

  if (!errors.empty()) {
    std::string message = "scenario validation failed:";
    for (const auto& error : errors) {
      message += "\n  - " + error;
    }
    throw std::invalid_argument(message);
  }
}

std::string format_scenario_entry(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return key + " " + buf;
}

}  // namespace soar

// Command-line front end: scenario runs, the loiter-radius sweep, and polar
// fitting from glide data.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "soar/polar_fit.hpp"
#include "soar/scenario.hpp"
#include "soar/sim.hpp"

namespace {

std::vector<soar::GlideSample> load_samples(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open samples file '" + path + "'");
  }
  std::vector<soar::GlideSample> samples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    for (auto& c : line) {
      if (c == ',') {
        c = ' ';
      }
    }
    std::istringstream row(line);
    soar::GlideSample sample;
    if (!(row >> sample.airspeed)) {
      continue;  // blank line
    }
    if (!(row >> sample.sink >> sample.bank)) {
      throw std::runtime_error("samples line " + std::to_string(line_no) +
                               ": expected 'airspeed sink bank'");
    }
    samples.push_back(sample);
  }
  return samples;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Thermal soaring controller simulator"};
  app.require_subcommand(1);

  // run
  std::string scenario_path;
  std::string log_path = "telemetry.csv";
  std::string metrics_path;
  std::optional<unsigned long> seed_override;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario and log telemetry");
  run_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
  run_cmd->add_option("--log", log_path, "Telemetry CSV output path");
  run_cmd->add_option("--metrics", metrics_path, "Also write the metrics summary here");
  run_cmd->add_option("--seed", seed_override, "Override the scenario seed");

  // sweep
  std::vector<double> thermal_radii{10, 20, 30, 50, 80, 100};
  std::vector<double> loiter_radii{15, 30, 60};
  double strength = 2.5;
  double sweep_airspeed = 9.0;
  soar::PolarCoefficients sweep_polar;
  std::string sweep_out = "sweep.csv";
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Climb-rate trade-off over thermal and loiter radii");
  sweep_cmd->add_option("--thermal-radii", thermal_radii, "Thermal radii, m")
      ->delimiter(',');
  sweep_cmd->add_option("--loiter-radii", loiter_radii, "Fixed loiter radii, m")
      ->delimiter(',');
  sweep_cmd->add_option("--strength", strength, "Thermal core strength, m/s");
  sweep_cmd->add_option("--airspeed", sweep_airspeed, "Trim airspeed, m/s");
  sweep_cmd->add_option("--polar-cd0", sweep_polar.c_d0, "Polar c_d0");
  sweep_cmd->add_option("--polar-b", sweep_polar.b, "Polar b");
  sweep_cmd->add_option("--polar-k", sweep_polar.k, "Polar k");
  sweep_cmd->add_option("--out", sweep_out, "Output table path");

  // fit-polar
  std::string samples_path;
  double fit_k = 0.0;
  double fit_mass = 0.0;
  double fit_wing_area = 0.0;
  double fit_rho = soar::kAirDensitySeaLevel;
  auto* fit_cmd = app.add_subcommand("fit-polar", "Least-squares polar fit from glide data");
  fit_cmd->add_option("samples", samples_path, "Rows of 'airspeed sink bank' (CSV ok)")
      ->required();
  fit_cmd->add_option("--k", fit_k, "Polar K directly (skips mass/wing-area)");
  fit_cmd->add_option("--mass", fit_mass, "Airframe mass, kg");
  fit_cmd->add_option("--wing-area", fit_wing_area, "Wing area, m^2");
  fit_cmd->add_option("--rho", fit_rho, "Air density, kg/m^3");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      soar::Scenario scenario = soar::Scenario::load(scenario_path);
      if (seed_override) {
        scenario.seed = *seed_override;
      }
      const soar::RunMetrics metrics = soar::run(scenario, log_path);
      soar::write_metrics(metrics, std::cout);
      if (!metrics_path.empty()) {
        std::ofstream out(metrics_path);
        if (!out) {
          throw std::runtime_error("cannot open metrics path '" + metrics_path + "'");
        }
        soar::write_metrics(metrics, out);
      }
      std::cerr << "telemetry written to " << log_path << "\n";
    } else if (*sweep_cmd) {
      const soar::SweepResult result =
          soar::radius_sweep(thermal_radii, loiter_radii, strength, sweep_polar, sweep_airspeed);
      std::ofstream out(sweep_out);
      if (!out) {
        throw std::runtime_error("cannot open sweep output '" + sweep_out + "'");
      }
      soar::write_sweep_table(result, out);
      soar::write_sweep_table(result, std::cout);
    } else if (*fit_cmd) {
      double k = fit_k;
      if (!(k > 0.0)) {
        if (!(fit_mass > 0.0 && fit_wing_area > 0.0)) {
          throw std::runtime_error("fit-polar: provide --k or both --mass and --wing-area");
        }
        k = soar::compute_k(fit_mass, fit_wing_area, fit_rho);
      }
      const auto samples = load_samples(samples_path);
      const soar::PolarFitResult fit = soar::fit_polar(samples, k);
      std::cout << soar::format_scenario_entry("SOAR_POLAR_CD0", fit.c_d0) << "\n"
                << soar::format_scenario_entry("SOAR_POLAR_B", fit.b) << "\n"
                << soar::format_scenario_entry("SOAR_POLAR_K", k) << "\n";
      std::cerr << "rms residual " << fit.rms_residual << " m/s\n";
      if (fit.suspect) {
        std::cerr << "warning: a fitted coefficient is non-positive; data looks suspect\n";
        return 2;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "downcross/model.hpp"
#include "downcross/pathsim.hpp"
#include "downcross/scale.hpp"

namespace downcross::cli {

/// Version string written into every JSON payload.
const char* version();

struct SimulationSettings {
  double dt = 1e-3;
  double t_max = 100.0;
  double x_stop = std::numeric_limits<double>::infinity();
  std::size_t paths = 1000;
  Scheme scheme = Scheme::EulerMaruyama;
  Monitoring monitoring = Monitoring::Discrete;
  BoundaryPolicy boundary = BoundaryPolicy::Abort;
  std::size_t max_events = 0;
  /// Crossing depth used by the simulation; must equal the analysis c.
  std::optional<double> c;
};

struct ClassifierSettings {
  std::optional<double> first_probe;
  double probe_limit = 1e300;
  int probes = 48;
};

struct BesselSettings {
  double k = 4.0;
  double rho = 1.0;
  int n_max = 1000;
};

struct VerifySettings {
  double alpha = 0.05;
  /// Added to the DKW band to absorb time-discretization bias.
  double allowance = 0.01;
  int grid_points = 200;
};

/// Everything a run needs. Parsed from JSON; to_json() gives the resolved
/// form, which parses back to the same config.
struct RunConfig {
  nlohmann::json model;  // {"drift": {...}, "diffusion": {...}}
  double c = 1.0;
  double x0 = 0.0;
  std::vector<double> gammas{0.0, 0.5, 1.0, 2.0, 4.0};
  int oracle_n = 1000;
  std::uint64_t seed = 0;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  unsigned workers = 0;
  SimulationSettings simulation;
  ClassifierSettings classifier;
  BesselSettings bessel;
  VerifySettings verify;

  DiffusionModel build_model() const;
  ScaleOptions scale_options() const;
  PathConfig path_config() const;
};

/// Throws ConfigError on unknown families, wrong types or invalid values.
/// A payload written by one of the commands is accepted too: its "config"
/// member is used.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
nlohmann::json to_json(const RunConfig& cfg);

DriftFamily parse_drift(const nlohmann::json& j);
DiffusionCoefficient parse_diffusion(const nlohmann::json& j);

struct CommandResult {
  /// Process exit code for a successful run (classify and verify encode their
  /// outcome here).
  int exit_code = 0;
  nlohmann::json payload;
  std::string csv;
};

/// Exit 0 Stops, 1 Forever, 2 Indeterminate. CSV: x,hazard,log_hazard.
CommandResult cmd_classify(const RunConfig& cfg);
/// CSV: gamma,analytic,lower,upper.
CommandResult cmd_onset(const RunConfig& cfg);
/// CSV: the event stream of every path.
CommandResult cmd_simulate(const RunConfig& cfg);
/// Exit 0 when the KS distance is inside the DKW band plus the allowance, 1
/// otherwise. CSV: gamma,empirical,analytic.
CommandResult cmd_verify(const RunConfig& cfg);
/// CSV: n,term,partial_sum.
CommandResult cmd_bessel(const RunConfig& cfg);

/// Exit code for an exception escaping a command: 3 for configuration and
/// usage errors, 4 for numerical and domain errors, 5 for anything else.
int exit_code_for(const std::exception& e);

/// The command-line front end. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace downcross::cli

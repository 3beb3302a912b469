#pragma once

// Flat `key = value` configuration. Vehicle and controller keys use the parameter-table
// names (m, l, b, J_xx, ..., K_I_w_z) and are mandatory in a configuration file; every
// other key is optional and falls back to the built-in default.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tailsitter/control.hpp"
#include "tailsitter/estimator.hpp"
#include "tailsitter/scenario.hpp"
#include "tailsitter/sensors.hpp"

namespace tailsitter {

struct SimRates {
  double physics_hz = 2000.0;
  double imu_hz = 1000.0;
  double pose_hz = 100.0;
  double log_hz = 100.0;
};

struct Config {
  VehicleParams vehicle;
  ActuatorDynamics actuators;
  ControllerGains gains;
  LoopRates loops;
  SimRates rates;
  DisturbanceSpec disturbance;
  EstimatorMode estimator = EstimatorMode::kPerfect;
  EstimatorGains estimator_gains;
  Scenario scenario;
  Vector3d initial_offset = Vector3d::Zero();  // m, added to the reference start
  double metrics_window = 5.0;                  // s, transient excluded from RMS

  /// Throws ConfigError listing every problem found.
  void validate() const;
};

/// Raw key/value pairs in file order of last assignment.
using KeyValues = std::map<std::string, std::string>;

/// Parses `key = value` lines; `#` starts a comment. Throws ConfigError on syntax errors.
KeyValues parse_key_values(std::istream& in, const std::string& source_name = "<input>");

/// Applies `values` on top of `base`. When `require_table_keys` is set every vehicle and
/// controller key must be present. Unknown keys, malformed values and invariant
/// violations are all reported together in one ConfigError.
Config apply_key_values(const KeyValues& values, Config base = {}, bool require_table_keys = true);

/// Loads and layers several files (later files override earlier ones).
Config load_config(const std::vector<std::string>& paths);

/// Writes every key with its current value; the output parses back to the same Config.
void write_config(std::ostream& out, const Config& config);

/// The mandatory vehicle/controller keys.
const std::vector<std::string>& required_keys();

}  // namespace tailsitter

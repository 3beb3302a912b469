#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "tailsitter/config.hpp"
#include "tailsitter/metrics.hpp"

namespace tailsitter {

struct LogRow {
  double time = 0.0;
  Setpoint reference;
  VehicleState truth;
  StateEstimate estimate;
  Vector3d force_des = Vector3d::Zero();
  Vector3d rate_des = Vector3d::Zero();
  Vector3d torque_des = Vector3d::Zero();
  ActuatorCommand command;
  std::uint8_t saturation = 0;
  bool roll_clamped = false;
};

struct ScenarioLog {
  std::vector<LogRow> rows;
  double log_hz = 100.0;
};

/// Column names of the CSV log, in order.
const std::vector<std::string>& log_columns();

void write_log_csv(std::ostream& out, const ScenarioLog& log);

struct ScenarioResult {
  ScenarioLog log;
  Metrics metrics;
};

/// Closed-loop run of the configured scenario. The vehicle starts trimmed at the
/// reference start plus `initial_offset`. Deterministic for a given configuration.
/// Throws Error(kSimulationDiverged) naming the simulation time on divergence.
ScenarioResult run_scenario(const Config& config);

/// Runs independent scenarios on up to `workers` threads; results keep input order.
std::vector<ScenarioResult> run_sweep(const std::vector<Config>& configs, unsigned workers);

}  // namespace tailsitter

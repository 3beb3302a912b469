#include "tailsitter/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "tailsitter/error.hpp"

namespace tailsitter {

namespace {

std::uint64_t ticks_per(double fast_hz, double slow_hz) {
  return static_cast<std::uint64_t>(std::llround(fast_hz / slow_hz));
}

void append(std::string& line, double v) {
  line += fmt::format(",{:.10g}", v);
}

}  // namespace

const std::vector<std::string>& log_columns() {
  static const std::vector<std::string> columns = {
      "t",
      "ref_x", "ref_y", "ref_z", "ref_vx", "ref_vy", "ref_vz", "ref_psi",
      "x", "y", "z", "vx", "vy", "vz", "qw", "qx", "qy", "qz", "wx", "wy", "wz",
      "est_x", "est_y", "est_z", "est_vx", "est_vy", "est_vz",
      "est_qw", "est_qx", "est_qy", "est_qz", "est_wx", "est_wy", "est_wz",
      "fdes_x", "fdes_y", "fdes_z",
      "wdes_x", "wdes_y", "wdes_z",
      "mdes_x", "mdes_y", "mdes_z",
      "cmd_omega_l", "cmd_omega_r", "cmd_delta_l", "cmd_delta_r",
      "act_omega_l", "act_omega_r", "act_delta_l", "act_delta_r",
      "sat_flags", "roll_clamped"};
  return columns;
}

void write_log_csv(std::ostream& out, const ScenarioLog& log) {
  const auto& cols = log_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  std::string line;
  for (const LogRow& r : log.rows) {
    line = fmt::format("{:.10g}", r.time);
    for (int a = 0; a < 3; ++a) append(line, r.reference.position[a]);
    for (int a = 0; a < 3; ++a) append(line, r.reference.velocity[a]);
    append(line, r.reference.heading);
    for (int a = 0; a < 3; ++a) append(line, r.truth.position[a]);
    for (int a = 0; a < 3; ++a) append(line, r.truth.velocity[a]);
    append(line, r.truth.attitude.w());
    append(line, r.truth.attitude.x());
    append(line, r.truth.attitude.y());
    append(line, r.truth.attitude.z());
    for (int a = 0; a < 3; ++a) append(line, r.truth.body_rate[a]);
    for (int a = 0; a < 3; ++a) append(line, r.estimate.position[a]);
    for (int a = 0; a < 3; ++a) append(line, r.estimate.velocity[a]);
    append(line, r.estimate.attitude.w());
    append(line, r.estimate.attitude.x());
    append(line, r.estimate.attitude.y());
    append(line, r.estimate.attitude.z());
    for (int a = 0; a < 3; ++a) append(line, r.estimate.body_rate[a]);
    for (int a = 0; a < 3; ++a) append(line, r.force_des[a]);
    for (int a = 0; a < 3; ++a) append(line, r.rate_des[a]);
    for (int a = 0; a < 3; ++a) append(line, r.torque_des[a]);
    append(line, r.command.omega_left);
    append(line, r.command.omega_right);
    append(line, r.command.delta_left);
    append(line, r.command.delta_right);
    append(line, r.truth.actuators.omega_left);
    append(line, r.truth.actuators.omega_right);
    append(line, r.truth.actuators.delta_left);
    append(line, r.truth.actuators.delta_right);
    line += fmt::format(",{},{}\n", static_cast<int>(r.saturation), r.roll_clamped ? 1 : 0);
    out << line;
  }
}

ScenarioResult run_scenario(const Config& config) {
  config.validate();
  const VehicleParams& params = config.vehicle;
  const SimRates& rates = config.rates;
  const double dt = 1.0 / rates.physics_hz;
  const auto steps = static_cast<std::uint64_t>(std::llround(config.scenario.duration * rates.physics_hz));
  const auto imu_div = ticks_per(rates.physics_hz, rates.imu_hz);
  const auto pose_div = ticks_per(rates.physics_hz, rates.pose_hz);
  const auto log_div = ticks_per(rates.physics_hz, rates.log_hz);
  const double imu_dt = 1.0 / rates.imu_hz;

  const ReferenceTrajectory trajectory(config.scenario);
  const Setpoint start = trajectory.at(0.0);
  VehicleState state = hover_state(params, start.position + config.initial_offset, start.heading);

  Cascade cascade(params, config.gains, config.loops, rates.physics_hz);
  LoadDisturbance loads(config.disturbance);
  Rng sensor_rng(config.disturbance.seed);
  ComplementaryEstimator estimator(config.estimator_gains, params.gravity_world(), perfect_estimate(state));
  const bool perfect = config.estimator == EstimatorMode::kPerfect;

  ScenarioResult result;
  result.log.log_hz = rates.log_hz;
  result.log.rows.reserve(static_cast<std::size_t>(steps / log_div + 1));

  for (std::uint64_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const Setpoint setpoint = trajectory.at(t);
    const ExternalLoads external = loads.next(dt);

    if (!perfect && k % imu_div == 0) {
      const Matrix3d r_wb = state.world_to_body();
      Wrench wrench = total_wrench(state.actuators, r_wb, params);
      wrench.force += r_wb * external.force_world;
      wrench.torque += external.torque_body;
      const SensorSample sample =
          sense(state, wrench, t, k % pose_div == 0, params, config.disturbance, sensor_rng);
      estimator.update(sample, imu_dt);
    }
    const StateEstimate estimate = perfect ? perfect_estimate(state) : estimator.estimate();

    try {
      cascade.update(k, estimate, setpoint);
    } catch (const Error& e) {
      throw Error(e.category(), fmt::format("t = {:.4f} s: {}", t, e.what()));
    }

    if (k % log_div == 0) {
      LogRow row;
      row.time = t;
      row.reference = setpoint;
      row.truth = state;
      row.estimate = estimate;
      row.force_des = cascade.force_des();
      row.rate_des = cascade.rate_des();
      row.torque_des = cascade.torque_des();
      row.command = cascade.command();
      row.saturation = cascade.saturation();
      row.roll_clamped = cascade.roll_clamped();
      result.log.rows.push_back(row);
    }

    try {
      state = step(state, cascade.command(), dt, params, config.actuators, external);
    } catch (const Error& e) {
      throw Error(e.category(), fmt::format("t = {:.4f} s: {}", t + dt, e.what()));
    }
  }

  result.metrics = compute_metrics(result.log, config.metrics_window);
  return result;
}

std::vector<ScenarioResult> run_sweep(const std::vector<Config>& configs, unsigned workers) {
  std::vector<ScenarioResult> results(configs.size());
  std::vector<std::exception_ptr> errors(configs.size());
  std::atomic<std::size_t> next{0};
  const unsigned count = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(configs.size())));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < count; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < configs.size(); i = next++) {
          try {
            results[i] = run_scenario(configs[i]);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace tailsitter

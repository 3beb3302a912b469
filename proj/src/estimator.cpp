#include "tailsitter/estimator.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tailsitter/error.hpp"

namespace tailsitter {

StateEstimate perfect_estimate(const VehicleState& state) {
  return {state.position, state.velocity, state.attitude, state.body_rate};
}

void EstimatorGains::validate() const {
  std::vector<std::string> problems;
  auto unit_interval = [&](const char* name, double v) {
    if (!(v > 0.0 && v <= 1.0)) problems.push_back(std::string(name) + " must be in (0, 1]");
  };
  unit_interval("est_attitude_blend", attitude_blend);
  unit_interval("est_position_alpha", position_alpha);
  if (!(position_beta >= 0.0 && position_beta < 2.0)) {
    problems.emplace_back("est_position_beta must be in [0, 2)");
  }
  if (!(lowpass_cutoff_hz > 0.0 && std::isfinite(lowpass_cutoff_hz))) {
    problems.emplace_back("lowpass_cutoff_hz must be > 0");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

ComplementaryEstimator::ComplementaryEstimator(const EstimatorGains& gains,
                                               const Vector3d& gravity_world,
                                               const StateEstimate& initial)
    : gains_(gains),
      gravity_world_(gravity_world),
      estimate_(initial),
      gyro_filter_(gains.lowpass_cutoff_hz),
      accel_filter_(gains.lowpass_cutoff_hz) {}

const StateEstimate& ComplementaryEstimator::update(const SensorSample& sample, double dt) {
  const Vector3d gyro = gyro_filter_.step(sample.gyro, dt);
  const Vector3d accel = accel_filter_.step(sample.accel, dt);

  const Vector3d accel_world = estimate_.attitude * accel + gravity_world_;
  estimate_.position += dt * estimate_.velocity + 0.5 * dt * dt * accel_world;
  estimate_.velocity += dt * accel_world;

  const double angle = gyro.norm() * dt;
  if (angle > 0.0) {
    estimate_.attitude =
        (estimate_.attitude * Quaterniond(Eigen::AngleAxisd(angle, gyro.normalized()))).normalized();
  }
  estimate_.body_rate = gyro;

  if (sample.pose) {
    const PoseMeasurement& pose = *sample.pose;
    const Vector3d residual = pose.position - estimate_.position;
    estimate_.position += gains_.position_alpha * residual;
    if (has_pose_ && pose.time > last_pose_time_) {
      estimate_.velocity += gains_.position_beta / (pose.time - last_pose_time_) * residual;
    }
    estimate_.attitude = estimate_.attitude.slerp(gains_.attitude_blend, pose.attitude).normalized();
    last_pose_time_ = pose.time;
    has_pose_ = true;
  }
  return estimate_;
}

}  // namespace tailsitter

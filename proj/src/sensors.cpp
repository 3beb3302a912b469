#include "tailsitter/sensors.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tailsitter/error.hpp"

namespace tailsitter {

namespace {

Vector3d gaussian3(Rng& rng, double std_dev) {
  if (std_dev == 0.0) return Vector3d::Zero();
  std::normal_distribution<double> n(0.0, std_dev);
  const double x = n(rng);
  const double y = n(rng);
  const double z = n(rng);
  return {x, y, z};
}

// Separate random streams so that, e.g., switching estimators does not reshuffle the plant noise.
constexpr std::uint64_t kLoadStream = 0x9e3779b97f4a7c15ULL;

}  // namespace

DisturbanceSpec DisturbanceSpec::none() {
  DisturbanceSpec spec;
  spec.torque_noise_std.setZero();
  spec.gyro_noise_std = 0.0;
  spec.accel_noise_std = 0.0;
  spec.pose_position_noise_std = 0.0;
  spec.pose_attitude_noise_std = 0.0;
  return spec;
}

void DisturbanceSpec::validate() const {
  std::vector<std::string> problems;
  auto nonneg = [&](const char* name, double v) {
    if (!std::isfinite(v) || v < 0.0) problems.push_back(std::string(name) + " must be finite and >= 0");
  };
  nonneg("torque_noise_std_x", torque_noise_std.x());
  nonneg("torque_noise_std_y", torque_noise_std.y());
  nonneg("torque_noise_std_z", torque_noise_std.z());
  nonneg("gyro_noise_std", gyro_noise_std);
  nonneg("accel_noise_std", accel_noise_std);
  nonneg("pose_position_noise_std", pose_position_noise_std);
  nonneg("pose_attitude_noise_std", pose_attitude_noise_std);
  if (!std::isfinite(torque_noise_tau) || torque_noise_tau <= 0.0) {
    problems.emplace_back("torque_noise_tau must be finite and > 0");
  }
  if (!force_offset_world.allFinite() || !torque_offset_body.allFinite() || !gyro_bias.allFinite()) {
    problems.emplace_back("disturbance offsets must be finite");
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

SensorSample sense(const VehicleState& state, const Wrench& wrench_body, double time,
                   bool with_pose, const VehicleParams& params, const DisturbanceSpec& spec,
                   Rng& rng) {
  SensorSample sample;
  sample.time = time;
  sample.gyro = state.body_rate + spec.gyro_bias + gaussian3(rng, spec.gyro_noise_std);
  sample.accel = specific_force(state, wrench_body, params) + gaussian3(rng, spec.accel_noise_std);
  if (with_pose) {
    PoseMeasurement pose;
    pose.time = time;
    pose.position = state.position + gaussian3(rng, spec.pose_position_noise_std);
    const Vector3d tilt = gaussian3(rng, spec.pose_attitude_noise_std);
    const double angle = tilt.norm();
    const Quaterniond perturb =
        angle > 0.0 ? Quaterniond(Eigen::AngleAxisd(angle, tilt / angle)) : Quaterniond::Identity();
    pose.attitude = (state.attitude * perturb).normalized();
    sample.pose = pose;
  }
  return sample;
}

LoadDisturbance::LoadDisturbance(const DisturbanceSpec& spec) : spec_(spec), rng_(spec.seed ^ kLoadStream) {}

ExternalLoads LoadDisturbance::next(double dt) {
  if ((spec_.torque_noise_std.array() != 0.0).any()) {
    const double decay = std::exp(-dt / spec_.torque_noise_tau);
    const double drive = std::sqrt(1.0 - decay * decay);
    std::normal_distribution<double> n(0.0, 1.0);
    for (int i = 0; i < 3; ++i) {
      const double w = n(rng_);
      torque_noise_[i] = decay * torque_noise_[i] + spec_.torque_noise_std[i] * drive * w;
    }
  }
  return {spec_.force_offset_world, spec_.torque_offset_body + torque_noise_};
}

Vector3d LowPassFilter::step(const Vector3d& sample, double dt) {
  if (!initialized_) {
    value_ = sample;
    initialized_ = true;
    return value_;
  }
  const double gain = 1.0 - std::exp(-2.0 * std::numbers::pi * cutoff_hz_ * dt);
  value_ += gain * (sample - value_);
  return value_;
}

}  // namespace tailsitter

#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "tailsitter/dynamics.hpp"

namespace tailsitter {

using Rng = std::mt19937_64;

/// Plant disturbances and sensor imperfections. Default-constructed values are the
/// shipped defaults; `none()` is the ideal, noise-free setting.
struct DisturbanceSpec {
  Vector3d force_offset_world = Vector3d::Zero();  // N
  Vector3d torque_offset_body = Vector3d::Zero();  // N m
  /// Stationary std of a first-order Gauss-Markov body torque (control-surface buffeting).
  Vector3d torque_noise_std{3e-3, 6.5e-3, 0.0};  // N m
  double torque_noise_tau = 0.1;              // s, correlation time

  double gyro_noise_std = 0.005;                 // rad/s
  Vector3d gyro_bias = Vector3d::Zero();         // rad/s
  double accel_noise_std = 0.05;                 // m/s^2
  double pose_position_noise_std = 1e-3;         // m
  double pose_attitude_noise_std = 1.745329e-3;  // rad (0.1 deg)
  std::uint64_t seed = 1;

  static DisturbanceSpec none();
  /// Throws ConfigError when any standard deviation or time constant is invalid.
  void validate() const;
};

struct PoseMeasurement {
  double time = 0.0;
  Vector3d position = Vector3d::Zero();
  Quaterniond attitude = Quaterniond::Identity();  // body-to-world
};

struct SensorSample {
  double time = 0.0;
  Vector3d gyro = Vector3d::Zero();   // rad/s, body
  Vector3d accel = Vector3d::Zero();  // m/s^2, body specific force
  std::optional<PoseMeasurement> pose;
};

/// IMU (and optionally external pose) reading of the true state. `wrench_body` is the
/// total wrench acting on the vehicle, gravity included.
SensorSample sense(const VehicleState& state, const Wrench& wrench_body, double time,
                   bool with_pose, const VehicleParams& params, const DisturbanceSpec& spec,
                   Rng& rng);

/// Draws the stochastic part of the external loads; owns its own random stream.
class LoadDisturbance {
 public:
  explicit LoadDisturbance(const DisturbanceSpec& spec);

  /// Loads to apply over the next physics step of length `dt`.
  ExternalLoads next(double dt);

 private:
  DisturbanceSpec spec_;
  Rng rng_;
  Vector3d torque_noise_ = Vector3d::Zero();
};

/// First-order low-pass, discretized exactly for a zero-order-held input.
class LowPassFilter {
 public:
  explicit LowPassFilter(double cutoff_hz) : cutoff_hz_(cutoff_hz) {}

  /// The first sample seeds the state so a constant input passes through unchanged.
  Vector3d step(const Vector3d& sample, double dt);
  const Vector3d& value() const { return value_; }
  void reset() { initialized_ = false; }

 private:
  double cutoff_hz_;
  bool initialized_ = false;
  Vector3d value_ = Vector3d::Zero();
};

}  // namespace tailsitter

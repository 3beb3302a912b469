#pragma once

#include "tailsitter/sensors.hpp"

namespace tailsitter {

struct StateEstimate {
  Vector3d position = Vector3d::Zero();
  Vector3d velocity = Vector3d::Zero();
  Quaterniond attitude = Quaterniond::Identity();  // body-to-world
  Vector3d body_rate = Vector3d::Zero();

  Matrix3d world_to_body() const { return attitude.toRotationMatrix().transpose(); }
};

enum class EstimatorMode { kPerfect, kComplementary };

/// Passthrough used when the controller should see the true state.
StateEstimate perfect_estimate(const VehicleState& state);

struct EstimatorGains {
  /// Fraction of the attitude residual removed at each pose update.
  double attitude_blend = 0.1;
  /// Alpha-beta observer gains applied at each pose update.
  double position_alpha = 0.3;
  double position_beta = 0.053;
  double lowpass_cutoff_hz = 20.0;

  void validate() const;
};

/// Gyro-propagated attitude blended toward external attitude fixes, plus an
/// accelerometer-driven alpha-beta position/velocity observer corrected by pose fixes.
/// Gyro and accelerometer readings are low-passed before use.
class ComplementaryEstimator {
 public:
  ComplementaryEstimator(const EstimatorGains& gains, const Vector3d& gravity_world,
                         const StateEstimate& initial);

  /// Propagates over `dt` with the IMU part of `sample`, then applies the pose fix if present.
  const StateEstimate& update(const SensorSample& sample, double dt);

  const StateEstimate& estimate() const { return estimate_; }

 private:
  EstimatorGains gains_;
  Vector3d gravity_world_;
  StateEstimate estimate_;
  LowPassFilter gyro_filter_;
  LowPassFilter accel_filter_;
  double last_pose_time_ = 0.0;
  bool has_pose_ = false;
};

}  // namespace tailsitter

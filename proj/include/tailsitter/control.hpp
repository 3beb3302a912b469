#pragma once

// Cascaded position -> attitude -> rate control with model-inverse allocation.

#include <cstdint>

#include "tailsitter/estimator.hpp"
#include "tailsitter/vehicle_model.hpp"

namespace tailsitter {

struct ControllerGains {
  double tau_p_xy = 0.5;    // s
  double tau_p_z = 0.3;     // s
  double zeta_p_xy = 0.6;
  double zeta_p_z = 0.83;
  double tau_att = 0.2;     // s
  Vector3d tau_rate{0.04, 0.11, 0.04};  // s, per body axis
  Vector3d ki_rate{20.0, 5.0, 0.0};     // 1/s, per body axis

  void validate() const;
};

struct Setpoint {
  Vector3d position = Vector3d::Zero();  // world, m
  Vector3d velocity = Vector3d::Zero();  // world, m/s
  double heading = 0.0;                  // rad, wrapped to (-pi, pi]
};

/// Desired world-frame force from the second-order position law, gravity compensated.
Vector3d position_control(const Setpoint& setpoint, const Vector3d& position_est,
                          const Vector3d& velocity_est, const ControllerGains& gains,
                          const VehicleParams& params);

struct AttitudeTarget {
  Matrix3d world_to_body = Matrix3d::Identity();
  double thrust_per_motor = 0.0;  // N
};

/// Commanded force below this magnitude has no usable direction.
inline constexpr double kMinForce = 1e-3;  // N

/// Heading rotation about the world vertical followed by the smallest tilt that puts the
/// thrust axis (body -z) along `force_des`. Throws Error(kDegenerateThrust) when
/// |force_des| < kMinForce.
AttitudeTarget attitude_setpoint(const Vector3d& force_des, double heading);

/// Proportional attitude law on the Z-Y-X Euler angles of R_est * R_des^-1 (world-to-body
/// rotations). Falls back to the rotation vector when the middle angle nears +/-pi/2.
Vector3d attitude_control(const Matrix3d& world_to_body_est, const Matrix3d& world_to_body_des,
                          double tau_att);

/// PI rate law with gyroscopic compensation. Advances `integral` by the rate error times
/// `dt` unless `freeze_integral` is set. Returns the desired body torque.
Vector3d rate_control(const Vector3d& rate_est, const Vector3d& rate_des, Vector3d& integral,
                      double dt, const ControllerGains& gains, const VehicleParams& params,
                      bool freeze_integral = false);

/// Drag-free feedback-linearizing inverse of the actuator model. Unsaturated.
/// Throws Error(kInfeasibleRoll) when 2 f_a l <= |m_x| or f_a <= 0.
ActuatorCommand model_inverse(const Vector3d& torque_des, double thrust_per_motor,
                              const VehicleParams& params);

/// Bit flags for actuators that hit a limit during allocation.
enum SaturationFlag : std::uint8_t {
  kSatOmegaLeft = 1U << 0,
  kSatOmegaRight = 1U << 1,
  kSatDeltaLeft = 1U << 2,
  kSatDeltaRight = 1U << 3,
};

struct Allocation {
  ActuatorCommand command;
  std::uint8_t saturation = 0;
  bool roll_clamped = false;
};

/// Fraction of 2 f_a l kept clear when clamping the roll torque.
inline constexpr double kRollMargin = 0.05;

/// Clamps m_x into the feasible band, inverts and saturates.
Allocation allocate(const Vector3d& torque_des, double thrust_per_motor,
                    const VehicleParams& params);

struct LoopRates {
  double position_hz = 100.0;
  double attitude_hz = 250.0;
  double rate_hz = 500.0;
};

/// Multi-rate cascade driven by a base clock. Each stage runs when its divisor of the
/// base tick is reached and otherwise holds its last output.
class Cascade {
 public:
  /// `base_hz` must be an integer multiple of every loop rate.
  Cascade(const VehicleParams& params, const ControllerGains& gains, const LoopRates& rates,
          double base_hz);

  /// Runs the stages due at base tick `tick` (position first, then attitude, then rate
  /// and allocation) and returns the latest saturated command.
  const ActuatorCommand& update(std::uint64_t tick, const StateEstimate& estimate,
                                const Setpoint& setpoint);

  const Vector3d& force_des() const { return force_des_; }
  const AttitudeTarget& attitude_target() const { return attitude_target_; }
  const Vector3d& rate_des() const { return rate_des_; }
  const Vector3d& torque_des() const { return torque_des_; }
  const Vector3d& rate_integral() const { return rate_integral_; }
  const ActuatorCommand& command() const { return allocation_.command; }
  std::uint8_t saturation() const { return allocation_.saturation; }
  bool roll_clamped() const { return allocation_.roll_clamped; }

  /// Overrides the latched position-loop output (used before the first position tick).
  void latch_force(const Vector3d& force_des);

 private:
  VehicleParams params_;
  ControllerGains gains_;
  std::uint64_t position_div_;
  std::uint64_t attitude_div_;
  std::uint64_t rate_div_;
  double rate_dt_;

  Vector3d force_des_;
  AttitudeTarget attitude_target_;
  Vector3d rate_des_ = Vector3d::Zero();
  Vector3d torque_des_ = Vector3d::Zero();
  Vector3d rate_integral_ = Vector3d::Zero();
  Allocation allocation_;
};

}  // namespace tailsitter

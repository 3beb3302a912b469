#include "tailsitter/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tailsitter/dynamics.hpp"
#include "tailsitter/error.hpp"
#include "tailsitter/rotation.hpp"

namespace tailsitter {

namespace {

// Beyond this middle Euler angle the Z-Y-X extraction is too ill-conditioned to use.
constexpr double kGimbalGuard = 1.4;  // rad

std::uint64_t divisor(double base_hz, double loop_hz, const char* name) {
  const double ratio = base_hz / loop_hz;
  const double rounded = std::round(ratio);
  if (!(loop_hz > 0.0) || rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw ConfigError({std::string(name) + " must divide the physics rate evenly"});
  }
  return static_cast<std::uint64_t>(rounded);
}

}  // namespace

void ControllerGains::validate() const {
  std::vector<std::string> problems;
  auto positive = [&](const char* name, double v) {
    if (!(std::isfinite(v) && v > 0.0)) problems.push_back(std::string(name) + " must be finite and > 0");
  };
  auto damping = [&](const char* name, double v) {
    if (!(v > 0.0 && v <= 2.0)) problems.push_back(std::string(name) + " must be in (0, 2]");
  };
  auto nonneg = [&](const char* name, double v) {
    if (!(std::isfinite(v) && v >= 0.0)) problems.push_back(std::string(name) + " must be finite and >= 0");
  };
  positive("tau_p_xy", tau_p_xy);
  positive("tau_p_z", tau_p_z);
  damping("zeta_p_xy", zeta_p_xy);
  damping("zeta_p_z", zeta_p_z);
  positive("tau_att", tau_att);
  positive("tau_w_x", tau_rate.x());
  positive("tau_w_y", tau_rate.y());
  positive("tau_w_z", tau_rate.z());
  nonneg("K_I_w_x", ki_rate.x());
  nonneg("K_I_w_y", ki_rate.y());
  nonneg("K_I_w_z", ki_rate.z());
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

Vector3d position_control(const Setpoint& setpoint, const Vector3d& position_est,
                          const Vector3d& velocity_est, const ControllerGains& gains,
                          const VehicleParams& params) {
  const Vector3d tau(gains.tau_p_xy, gains.tau_p_xy, gains.tau_p_z);
  const Vector3d zeta(gains.zeta_p_xy, gains.zeta_p_xy, gains.zeta_p_z);
  const Vector3d kp = tau.cwiseProduct(tau).cwiseInverse();
  const Vector3d kd = 2.0 * zeta.cwiseQuotient(tau);
  const Vector3d accel_des = -params.gravity_world() +
                             kp.cwiseProduct(setpoint.position - position_est) +
                             kd.cwiseProduct(setpoint.velocity - velocity_est);
  return params.mass * accel_des;
}

AttitudeTarget attitude_setpoint(const Vector3d& force_des, double heading) {
  const double magnitude = force_des.norm();
  if (!(magnitude >= kMinForce)) {
    throw Error(ErrorCategory::kDegenerateThrust,
                "commanded force " + std::to_string(magnitude) + " N is too small to define a thrust axis");
  }
  const Matrix3d to_heading = heading_rotation(heading).transpose();
  const Vector3d dir = to_heading * (force_des / magnitude);
  Matrix3d tilt;
  if (dir.z() < -1.0 + 1e-12) {
    tilt = Eigen::AngleAxisd(std::numbers::pi, Vector3d::UnitX()).toRotationMatrix();
  } else {
    tilt = Quaterniond::FromTwoVectors(dir, Vector3d::UnitZ()).toRotationMatrix();
  }
  // Thrust-up frame to body frame: the thrust axis is body -z.
  return {hover_world_to_body() * tilt * to_heading, 0.5 * magnitude};
}

Vector3d attitude_control(const Matrix3d& world_to_body_est, const Matrix3d& world_to_body_des,
                          double tau_att) {
  const Matrix3d error = world_to_body_est * world_to_body_des.transpose();
  Vector3d angles = euler_zyx(error);
  if (std::abs(angles.y()) > kGimbalGuard) angles = rotation_log(error);
  return angles / tau_att;
}

Vector3d rate_control(const Vector3d& rate_est, const Vector3d& rate_des, Vector3d& integral,
                      double dt, const ControllerGains& gains, const VehicleParams& params,
                      bool freeze_integral) {
  const Vector3d& j = params.inertia;
  const Vector3d error = rate_des - rate_est;
  const Vector3d torque = rate_est.cross(j.cwiseProduct(rate_est)) +
                          j.cwiseProduct(error.cwiseQuotient(gains.tau_rate)) +
                          j.cwiseProduct(gains.ki_rate.cwiseProduct(integral));
  if (!freeze_integral) integral += error * dt;
  return torque;
}

ActuatorCommand model_inverse(const Vector3d& torque_des, double thrust_per_motor,
                              const VehicleParams& params) {
  const double l = params.arm_length;
  const double kt = params.k_thrust;
  const double km = params.k_moment;
  const double kl = params.k_lift;
  const double kp = params.k_pitch;
  const double mx = torque_des.x();
  const double my = torque_des.y();
  const double mz = torque_des.z();
  const double lever = 2.0 * thrust_per_motor * l;
  if (!(thrust_per_motor > 0.0) || !(lever > std::abs(mx))) {
    throw Error(ErrorCategory::kInfeasibleRoll,
                "roll torque " + std::to_string(mx) + " N m not achievable with per-motor thrust " +
                    std::to_string(thrust_per_motor) + " N");
  }
  ActuatorCommand cmd;
  cmd.omega_left = std::sqrt((mx + lever) / (2.0 * kt * l));
  cmd.omega_right = std::sqrt((-mx + lever) / (2.0 * kt * l));
  const double yaw_pitch_left = -kl * kt * my * l * l - kp * kt * mz * l + km * kp * mx;
  const double yaw_pitch_right = kl * kt * my * l * l - kp * kt * mz * l + km * kp * mx;
  cmd.delta_left = yaw_pitch_left / (kl * kp * l * (mx + lever));
  cmd.delta_right = yaw_pitch_right / (kl * kp * l * (mx - lever));
  return cmd;
}

Allocation allocate(const Vector3d& torque_des, double thrust_per_motor,
                    const VehicleParams& params) {
  Allocation out;
  Vector3d torque = torque_des;
  const double limit = (1.0 - kRollMargin) * 2.0 * thrust_per_motor * params.arm_length;
  if (std::abs(torque.x()) > limit) {
    torque.x() = std::copysign(limit, torque.x());
    out.roll_clamped = true;
  }
  const ActuatorCommand raw = model_inverse(torque, thrust_per_motor, params);
  out.command = saturate(raw, params);
  if (out.command.omega_left != raw.omega_left) out.saturation |= kSatOmegaLeft;
  if (out.command.omega_right != raw.omega_right) out.saturation |= kSatOmegaRight;
  if (out.command.delta_left != raw.delta_left) out.saturation |= kSatDeltaLeft;
  if (out.command.delta_right != raw.delta_right) out.saturation |= kSatDeltaRight;
  return out;
}

Cascade::Cascade(const VehicleParams& params, const ControllerGains& gains, const LoopRates& rates,
                 double base_hz)
    : params_(params),
      gains_(gains),
      position_div_(divisor(base_hz, rates.position_hz, "position_rate_hz")),
      attitude_div_(divisor(base_hz, rates.attitude_hz, "attitude_rate_hz")),
      rate_div_(divisor(base_hz, rates.rate_hz, "rate_rate_hz")),
      rate_dt_(1.0 / rates.rate_hz),
      force_des_(0.0, 0.0, params.mass * params.gravity) {
  attitude_target_ = attitude_setpoint(force_des_, 0.0);
  allocation_ = allocate(Vector3d::Zero(), attitude_target_.thrust_per_motor, params_);
}

void Cascade::latch_force(const Vector3d& force_des) { force_des_ = force_des; }

const ActuatorCommand& Cascade::update(std::uint64_t tick, const StateEstimate& estimate,
                                       const Setpoint& setpoint) {
  if (tick % position_div_ == 0) {
    force_des_ = position_control(setpoint, estimate.position, estimate.velocity, gains_, params_);
  }
  if (tick % attitude_div_ == 0) {
    attitude_target_ = attitude_setpoint(force_des_, setpoint.heading);
    rate_des_ = attitude_control(estimate.world_to_body(), attitude_target_.world_to_body,
                                 gains_.tau_att);
  }
  if (tick % rate_div_ == 0) {
    const bool saturated = allocation_.saturation != 0;
    torque_des_ = rate_control(estimate.body_rate, rate_des_, rate_integral_, rate_dt_, gains_,
                               params_, saturated);
    allocation_ = allocate(torque_des_, attitude_target_.thrust_per_motor, params_);
  }
  return allocation_.command;
}

}  // namespace tailsitter

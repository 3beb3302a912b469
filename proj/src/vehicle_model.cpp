#include "tailsitter/vehicle_model.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "tailsitter/error.hpp"
#include "tailsitter/rotation.hpp"

namespace tailsitter {

namespace {

void require_positive(std::vector<std::string>& problems, const char* name, double value) {
  if (!std::isfinite(value) || value <= 0.0) {
    problems.push_back(std::string(name) + " must be finite and > 0 (got " + std::to_string(value) +
                       ")");
  }
}

void check_omega(double omega, const VehicleParams& params) {
  if (!(omega >= 0.0 && omega <= params.omega_max)) {
    throw Error(ErrorCategory::kDomain, "propeller speed " + std::to_string(omega) +
                                            " rad/s outside [0, omega_max]");
  }
}

void check_delta(double delta, const VehicleParams& params) {
  if (!(std::abs(delta) <= params.delta_max)) {
    throw Error(ErrorCategory::kDomain,
                "elevon deflection " + std::to_string(delta) + " rad outside +/-delta_max");
  }
}

}  // namespace

void VehicleParams::validate() const {
  std::vector<std::string> problems;
  require_positive(problems, "m", mass);
  require_positive(problems, "l", arm_length);
  require_positive(problems, "b", wing_span);
  require_positive(problems, "J_xx", inertia.x());
  require_positive(problems, "J_yy", inertia.y());
  require_positive(problems, "J_zz", inertia.z());
  require_positive(problems, "k_t", k_thrust);
  require_positive(problems, "k_m", k_moment);
  require_positive(problems, "k_l", k_lift);
  require_positive(problems, "k_d", k_drag);
  require_positive(problems, "k_p", k_pitch);
  require_positive(problems, "omega_max", omega_max);
  require_positive(problems, "delta_max", delta_max);
  require_positive(problems, "g_mag", gravity);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

Wrench prop_wrench(double omega, Side side, const VehicleParams& params) {
  check_omega(omega, params);
  const double w2 = omega * omega;
  const double spin = side == Side::kLeft ? 1.0 : -1.0;
  return {Vector3d(0.0, 0.0, -params.k_thrust * w2), Vector3d(0.0, 0.0, spin * params.k_moment * w2)};
}

Wrench aero_wrench(double omega, double delta, const VehicleParams& params) {
  check_omega(omega, params);
  check_delta(delta, params);
  const double w2 = omega * omega;
  return {Vector3d(-params.k_lift * w2 * delta, 0.0, params.k_drag * w2 * delta * delta),
          Vector3d(0.0, -params.k_pitch * w2 * delta, 0.0)};
}

Vector3d side_position(Side side, const VehicleParams& params) {
  return {0.0, side == Side::kLeft ? -params.arm_length : params.arm_length, 0.0};
}

void check_actuator_range(const ActuatorState& act, const VehicleParams& params) {
  check_omega(act.omega_left, params);
  check_omega(act.omega_right, params);
  check_delta(act.delta_left, params);
  check_delta(act.delta_right, params);
}

bool within_limits(const ActuatorState& act, const VehicleParams& params) {
  const auto omega_ok = [&](double w) { return w >= 0.0 && w <= params.omega_max; };
  const auto delta_ok = [&](double d) { return std::abs(d) <= params.delta_max; };
  return omega_ok(act.omega_left) && omega_ok(act.omega_right) && delta_ok(act.delta_left) &&
         delta_ok(act.delta_right);
}

Wrench total_wrench(const ActuatorState& act, const Matrix3d& world_to_body,
                    const VehicleParams& params) {
  Wrench total;
  for (Side side : {Side::kLeft, Side::kRight}) {
    const Wrench unit =
        prop_wrench(act.omega(side), side, params) + aero_wrench(act.omega(side), act.delta(side), params);
    total.force += unit.force;
    total.torque += unit.torque + side_position(side, params).cross(unit.force);
  }
  total.force += world_to_body * (params.mass * params.gravity_world());
  return total;
}

double hover_omega(const VehicleParams& params) {
  return std::sqrt(params.mass * params.gravity / (2.0 * params.k_thrust));
}

Matrix3d hover_world_to_body() { return Vector3d(1.0, -1.0, -1.0).asDiagonal(); }

Vector3d hover_relative_euler(const Quaterniond& body_to_world) {
  return euler_zyx(body_to_world.toRotationMatrix() * hover_world_to_body());
}

}  // namespace tailsitter

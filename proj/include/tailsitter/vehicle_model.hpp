#pragma once

// Hover-regime force/torque model of the dual-rotor tail-sitter.
//
// Body frame: z runs from the nose toward the tail (propeller thrust is along -z),
// y runs along the wing toward the right motor, x is the wing normal completing a
// right-handed frame. World frame has z up; at hover body -z points to world up.

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tailsitter {

using Eigen::Matrix3d;
using Eigen::Quaterniond;
using Eigen::Vector3d;

enum class Side { kLeft, kRight };

struct VehicleParams {
  double mass = 0.65;          // kg
  double arm_length = 0.20;    // motor arm to centre of mass, m
  double wing_span = 0.64;     // m
  Vector3d inertia{1.4e-2, 6.4e-3, 1.8e-2};  // diagonal, kg m^2
  double k_thrust = 7.86e-6;   // N s^2/rad^2
  double k_moment = 1.80e-7;   // N m s^2/rad^2
  double k_lift = 3.48e-6;     // N s^2/rad^2
  double k_drag = 1.75e-6;     // N s^2/rad^2
  double k_pitch = 3.44e-7;    // N m s^2/rad^2
  double omega_max = 790.0;    // rad/s
  double delta_max = 0.785;    // rad
  double gravity = 9.81;       // m/s^2

  /// Throws ConfigError listing every non-positive or non-finite field.
  void validate() const;

  Vector3d gravity_world() const { return {0.0, 0.0, -gravity}; }
  Matrix3d inertia_matrix() const { return inertia.asDiagonal(); }
};

struct ActuatorState {
  double omega_left = 0.0;   // rad/s
  double omega_right = 0.0;  // rad/s
  double delta_left = 0.0;   // rad
  double delta_right = 0.0;  // rad

  double omega(Side side) const { return side == Side::kLeft ? omega_left : omega_right; }
  double delta(Side side) const { return side == Side::kLeft ? delta_left : delta_right; }

  bool operator==(const ActuatorState&) const = default;
};

/// Commanded propeller speeds and elevon deflections. Same layout as the state it drives.
using ActuatorCommand = ActuatorState;

struct Wrench {
  Vector3d force = Vector3d::Zero();   // N, body frame
  Vector3d torque = Vector3d::Zero();  // N m, body frame

  Wrench& operator+=(const Wrench& other) {
    force += other.force;
    torque += other.torque;
    return *this;
  }
  friend Wrench operator+(Wrench a, const Wrench& b) { return a += b; }
  bool all_finite() const { return force.allFinite() && torque.allFinite(); }
};

/// Propeller thrust and reaction torque. Left spins so its reaction torque is +z.
Wrench prop_wrench(double omega, Side side, const VehicleParams& params);

/// Lift, drag and pitching moment of one elevon in its propeller's downwash.
Wrench aero_wrench(double omega, double delta, const VehicleParams& params);

/// Body-frame position where a side's propeller/elevon forces act: (0, -l, 0) or (0, +l, 0).
Vector3d side_position(Side side, const VehicleParams& params);

/// Total body-frame wrench including moment arms and gravity.
/// `world_to_body` must be a proper rotation.
Wrench total_wrench(const ActuatorState& act, const Matrix3d& world_to_body,
                    const VehicleParams& params);

/// Throws DomainError unless 0 <= omega <= omega_max and |delta| <= delta_max.
void check_actuator_range(const ActuatorState& act, const VehicleParams& params);

/// True when every speed is in [0, omega_max] and every deflection within +/-delta_max.
bool within_limits(const ActuatorState& act, const VehicleParams& params);

/// Propeller speed at which both motors together carry the vehicle weight.
double hover_omega(const VehicleParams& params);

/// World-to-body rotation of the nose-up hover pose at zero heading (pi about x).
Matrix3d hover_world_to_body();

/// (roll, pitch, heading) of a body-to-world attitude measured from the hover pose,
/// Z-Y-X convention. Zero at hover facing world +x.
Vector3d hover_relative_euler(const Quaterniond& body_to_world);

}  // namespace tailsitter

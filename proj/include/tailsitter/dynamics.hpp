#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include "tailsitter/vehicle_model.hpp"

namespace tailsitter {

struct VehicleState {
  Vector3d position = Vector3d::Zero();  // world, m
  Vector3d velocity = Vector3d::Zero();  // world, m/s
  /// Body-to-world rotation (q * v_body = v_world). Its inverse is the world-to-body
  /// rotation used by the force model.
  Quaterniond attitude = Quaterniond::Identity();
  Vector3d body_rate = Vector3d::Zero();  // rad/s
  ActuatorState actuators;

  Matrix3d world_to_body() const { return attitude.toRotationMatrix().transpose(); }
  Matrix3d body_to_world() const { return attitude.toRotationMatrix(); }
  bool all_finite() const;
};

struct StateDerivative {
  Vector3d position = Vector3d::Zero();
  Vector3d velocity = Vector3d::Zero();
  Eigen::Vector4d attitude = Eigen::Vector4d::Zero();  // (w, x, y, z)
  Vector3d body_rate = Vector3d::Zero();
};

/// First-order lag time constants of the motor speed loop and the elevon servos.
struct ActuatorDynamics {
  double tau_motor = 0.025;  // s
  double tau_servo = 0.020;  // s
};

/// Loads that are not part of the actuator model: world-frame force, body-frame torque.
struct ExternalLoads {
  Vector3d force_world = Vector3d::Zero();
  Vector3d torque_body = Vector3d::Zero();
};

/// Newton-Euler rates. `wrench_body.force` already contains gravity.
StateDerivative derivative(const VehicleState& state, const Wrench& wrench_body,
                           const VehicleParams& params);

/// Exact discrete solution of the actuator lags over `dt`, commands clamped to limits.
ActuatorState actuator_step(const ActuatorState& act, const ActuatorCommand& command, double dt,
                            const VehicleParams& params, const ActuatorDynamics& dynamics);

/// Clamps a command to [0, omega_max] and [-delta_max, delta_max].
ActuatorCommand saturate(const ActuatorCommand& command, const VehicleParams& params);

/// Largest step `step` accepts.
inline constexpr double kMaxPhysicsStep = 2e-3;

/// One classical RK4 step of the rigid body with the actuators following their lag
/// dynamics inside the step, then quaternion renormalization.
/// Throws Error(kDomain) for dt outside (0, kMaxPhysicsStep] and
/// Error(kSimulationDiverged) if the result is not finite.
VehicleState step(const VehicleState& state, const ActuatorCommand& command, double dt,
                  const VehicleParams& params, const ActuatorDynamics& dynamics,
                  const ExternalLoads& loads = {});

/// Same integrator without the step-size guard; used by convergence studies.
VehicleState integrate_rk4(const VehicleState& state, const ActuatorCommand& command, double dt,
                           const VehicleParams& params, const ActuatorDynamics& dynamics,
                           const ExternalLoads& loads = {});

/// Hover equilibrium at `position` with heading `psi` and trimmed actuators.
VehicleState hover_state(const VehicleParams& params, const Vector3d& position = Vector3d::Zero(),
                         double psi = 0.0);

/// Body-frame specific force (what an ideal accelerometer reads).
Vector3d specific_force(const VehicleState& state, const Wrench& wrench_body,
                        const VehicleParams& params);

}  // namespace tailsitter

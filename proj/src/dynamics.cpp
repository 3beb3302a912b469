#include "tailsitter/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tailsitter/error.hpp"
#include "tailsitter/rotation.hpp"

namespace tailsitter {

namespace {

Eigen::Vector4d coeffs_wxyz(const Quaterniond& q) { return {q.w(), q.x(), q.y(), q.z()}; }

Quaterniond from_wxyz(const Eigen::Vector4d& v) { return Quaterniond(v[0], v[1], v[2], v[3]); }

VehicleState advance(const VehicleState& base, const StateDerivative& d, double h,
                     const ActuatorState& act) {
  VehicleState out = base;
  out.position += h * d.position;
  out.velocity += h * d.velocity;
  out.attitude = from_wxyz(coeffs_wxyz(base.attitude) + h * d.attitude).normalized();
  out.body_rate += h * d.body_rate;
  out.actuators = act;
  return out;
}

StateDerivative stage(const VehicleState& s, const VehicleParams& params, const ExternalLoads& loads) {
  const Matrix3d r_wb = s.world_to_body();
  Wrench w = total_wrench(s.actuators, r_wb, params);
  w.force += r_wb * loads.force_world;
  w.torque += loads.torque_body;
  return derivative(s, w, params);
}

double lag(double value, double target, double dt, double tau) {
  return target + (value - target) * std::exp(-dt / tau);
}

}  // namespace

bool VehicleState::all_finite() const {
  return position.allFinite() && velocity.allFinite() && attitude.coeffs().allFinite() &&
         body_rate.allFinite() && std::isfinite(actuators.omega_left) &&
         std::isfinite(actuators.omega_right) && std::isfinite(actuators.delta_left) &&
         std::isfinite(actuators.delta_right);
}

StateDerivative derivative(const VehicleState& state, const Wrench& wrench_body,
                           const VehicleParams& params) {
  StateDerivative d;
  d.position = state.velocity;
  d.velocity = state.body_to_world() * wrench_body.force / params.mass;
  const Quaterniond rate(0.0, state.body_rate.x(), state.body_rate.y(), state.body_rate.z());
  d.attitude = 0.5 * coeffs_wxyz(state.attitude * rate);
  const Vector3d& w = state.body_rate;
  const Vector3d& j = params.inertia;
  d.body_rate = (wrench_body.torque - w.cross(j.cwiseProduct(w))).cwiseQuotient(j);
  return d;
}

ActuatorCommand saturate(const ActuatorCommand& command, const VehicleParams& params) {
  return {std::clamp(command.omega_left, 0.0, params.omega_max),
          std::clamp(command.omega_right, 0.0, params.omega_max),
          std::clamp(command.delta_left, -params.delta_max, params.delta_max),
          std::clamp(command.delta_right, -params.delta_max, params.delta_max)};
}

ActuatorState actuator_step(const ActuatorState& act, const ActuatorCommand& command, double dt,
                            const VehicleParams& params, const ActuatorDynamics& dynamics) {
  const ActuatorCommand target = saturate(command, params);
  const ActuatorState next{lag(act.omega_left, target.omega_left, dt, dynamics.tau_motor),
                           lag(act.omega_right, target.omega_right, dt, dynamics.tau_motor),
                           lag(act.delta_left, target.delta_left, dt, dynamics.tau_servo),
                           lag(act.delta_right, target.delta_right, dt, dynamics.tau_servo)};
  return saturate(next, params);
}

VehicleState integrate_rk4(const VehicleState& state, const ActuatorCommand& command, double dt,
                           const VehicleParams& params, const ActuatorDynamics& dynamics,
                           const ExternalLoads& loads) {
  const ActuatorState act_mid = actuator_step(state.actuators, command, 0.5 * dt, params, dynamics);
  const ActuatorState act_end = actuator_step(state.actuators, command, dt, params, dynamics);

  const StateDerivative k1 = stage(state, params, loads);
  const StateDerivative k2 = stage(advance(state, k1, 0.5 * dt, act_mid), params, loads);
  const StateDerivative k3 = stage(advance(state, k2, 0.5 * dt, act_mid), params, loads);
  const StateDerivative k4 = stage(advance(state, k3, dt, act_end), params, loads);

  StateDerivative sum;
  sum.position = k1.position + 2.0 * k2.position + 2.0 * k3.position + k4.position;
  sum.velocity = k1.velocity + 2.0 * k2.velocity + 2.0 * k3.velocity + k4.velocity;
  sum.attitude = k1.attitude + 2.0 * k2.attitude + 2.0 * k3.attitude + k4.attitude;
  sum.body_rate = k1.body_rate + 2.0 * k2.body_rate + 2.0 * k3.body_rate + k4.body_rate;

  VehicleState next = advance(state, sum, dt / 6.0, act_end);
  if (!next.all_finite()) {
    throw Error(ErrorCategory::kSimulationDiverged, "non-finite vehicle state after integration step");
  }
  return next;
}

VehicleState step(const VehicleState& state, const ActuatorCommand& command, double dt,
                  const VehicleParams& params, const ActuatorDynamics& dynamics,
                  const ExternalLoads& loads) {
  if (!(dt > 0.0 && dt <= kMaxPhysicsStep)) {
    throw Error(ErrorCategory::kDomain, "physics step " + std::to_string(dt) + " s outside (0, 2 ms]");
  }
  return integrate_rk4(state, command, dt, params, dynamics, loads);
}

VehicleState hover_state(const VehicleParams& params, const Vector3d& position, double psi) {
  VehicleState s;
  s.position = position;
  s.attitude = Quaterniond(heading_rotation(psi) * hover_world_to_body().transpose());
  const double w = hover_omega(params);
  s.actuators = {w, w, 0.0, 0.0};
  return s;
}

Vector3d specific_force(const VehicleState& state, const Wrench& wrench_body,
                        const VehicleParams& params) {
  return (wrench_body.force - state.world_to_body() * (params.mass * params.gravity_world())) /
         params.mass;
}

}  // namespace tailsitter

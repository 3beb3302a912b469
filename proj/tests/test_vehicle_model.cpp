#include <gtest/gtest.h>

#include "tailsitter/error.hpp"
#include "tailsitter/rotation.hpp"
#include "tailsitter/vehicle_model.hpp"

using namespace tailsitter;

namespace {

const VehicleParams kParams;

// Values below were evaluated by hand from the default constants (k_t w^2 etc).
constexpr double kHoverOmega = 636.8907056884772;

}  // namespace

TEST(PropWrench, ZeroSpeedIsZero) {
  const Wrench w = prop_wrench(0.0, Side::kLeft, kParams);
  EXPECT_EQ(w.force, Vector3d::Zero());
  EXPECT_EQ(w.torque, Vector3d::Zero());
}

TEST(PropWrench, HoverSpeedLeft) {
  const Wrench w = prop_wrench(636.9, Side::kLeft, kParams);
  EXPECT_NEAR(w.force.z(), -3.1883430546, 1e-9);
  EXPECT_NEAR(w.torque.z(), 0.0730154898, 1e-9);
  EXPECT_EQ(w.force.x(), 0.0);
  EXPECT_EQ(w.force.y(), 0.0);
}

TEST(PropWrench, MaxSpeedRight) {
  const Wrench w = prop_wrench(790.0, Side::kRight, kParams);
  EXPECT_NEAR(w.force.z(), -4.905426, 1e-9);
  EXPECT_LT(w.torque.z(), 0.0);
}

TEST(PropWrench, OutOfRangeThrows) {
  try {
    prop_wrench(800.0, Side::kLeft, kParams);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kDomain);
  }
  EXPECT_THROW(prop_wrench(-1.0, Side::kLeft, kParams), Error);
}

TEST(AeroWrench, ZeroDeflection) {
  const Wrench w = aero_wrench(636.9, 0.0, kParams);
  EXPECT_EQ(w.force, Vector3d::Zero());
  EXPECT_EQ(w.torque, Vector3d::Zero());
}

TEST(AeroWrench, PositiveDeflection) {
  const Wrench w = aero_wrench(636.9, 0.1, kParams);
  EXPECT_NEAR(w.force.x(), -0.14116328028, 1e-10);
  EXPECT_NEAR(w.force.y(), 0.0, 0.0);
  EXPECT_NEAR(w.force.z(), 0.007098728175, 1e-11);
  EXPECT_NEAR(w.torque.y(), -0.013954071384, 1e-11);
}

TEST(AeroWrench, Parity) {
  const Wrench pos = aero_wrench(500.0, 0.2, kParams);
  const Wrench neg = aero_wrench(500.0, -0.2, kParams);
  EXPECT_DOUBLE_EQ(neg.force.x(), -pos.force.x());
  EXPECT_DOUBLE_EQ(neg.force.z(), pos.force.z());
  EXPECT_DOUBLE_EQ(neg.torque.y(), -pos.torque.y());
  EXPECT_THROW(aero_wrench(500.0, 0.8, kParams), Error);
}

TEST(TotalWrench, HoverBalances) {
  ActuatorState act;
  act.omega_left = act.omega_right = hover_omega(kParams);
  const Wrench w = total_wrench(act, hover_world_to_body(), kParams);
  EXPECT_LT(w.force.norm(), 1e-9);
  EXPECT_LT(w.torque.norm(), 1e-9);
}

TEST(TotalWrench, DifferentialThrustRolls) {
  ActuatorState act;
  act.omega_left = 661.4;
  act.omega_right = 611.4;
  const Wrench w = total_wrench(act, hover_world_to_body(), kParams);
  EXPECT_NEAR(w.torque.x(), 0.10004208, 1e-8);
  EXPECT_NEAR(w.torque.y(), 0.0, 1e-12);
}

TEST(TotalWrench, NoActuationIsGravity) {
  const Wrench w = total_wrench(ActuatorState{}, Matrix3d::Identity(), kParams);
  EXPECT_NEAR((w.force - Vector3d(0, 0, -0.65 * 9.81)).norm(), 0.0, 1e-12);
  EXPECT_EQ(w.torque, Vector3d::Zero());
}

TEST(TotalWrench, ElevonMomentArm) {
  // Equal deflection on both sides pitches; opposite deflection yaws through lift * arm.
  ActuatorState act;
  act.omega_left = act.omega_right = 600.0;
  act.delta_left = act.delta_right = 0.2;
  const Wrench same = total_wrench(act, hover_world_to_body(), kParams);
  EXPECT_NEAR(same.torque.z(), 0.0, 1e-12);
  EXPECT_NEAR(same.torque.y(), -2.0 * kParams.k_pitch * 600.0 * 600.0 * 0.2, 1e-12);
  act.delta_right = -0.2;
  const Wrench opposite = total_wrench(act, hover_world_to_body(), kParams);
  EXPECT_NEAR(opposite.torque.y(), 0.0, 1e-12);
  EXPECT_NEAR(opposite.torque.z(), -2.0 * kParams.arm_length * kParams.k_lift * 600.0 * 600.0 * 0.2, 1e-12);
}

TEST(Hover, OmegaAndAttitude) {
  EXPECT_NEAR(hover_omega(kParams), kHoverOmega, 1e-9);
  EXPECT_TRUE(is_rotation(hover_world_to_body()));
  // Body -z maps to world up.
  const Vector3d up = hover_world_to_body().transpose() * Vector3d(0, 0, -1);
  EXPECT_NEAR((up - Vector3d::UnitZ()).norm(), 0.0, 1e-15);
  const Quaterniond q(hover_world_to_body().transpose());
  EXPECT_LT(hover_relative_euler(q).norm(), 1e-12);
}

TEST(Params, ValidateListsEveryProblem) {
  VehicleParams p;
  p.k_thrust = 0.0;
  p.mass = -1.0;
  try {
    p.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.problems().size(), 2U);
  }
}

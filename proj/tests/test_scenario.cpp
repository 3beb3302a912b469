#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "tailsitter/error.hpp"
#include "tailsitter/rotation.hpp"
#include "tailsitter/scenario.hpp"

using namespace tailsitter;

namespace {

Scenario of(ScenarioKind kind) {
  Scenario s;
  s.kind = kind;
  return s;
}

// Numerical derivative of the reference position.
Vector3d slope(const ReferenceTrajectory& r, double t, double h = 1e-6) {
  return (r.at(t + h).position - r.at(t - h).position) / (2.0 * h);
}

}  // namespace

TEST(Reference, Hover) {
  const ReferenceTrajectory r(of(ScenarioKind::kHover));
  for (double t : {0.0, 3.3, 60.0}) {
    EXPECT_EQ(r.at(t).position, Vector3d(0, 0, 1.5));
    EXPECT_EQ(r.at(t).velocity, Vector3d::Zero());
  }
}

TEST(Reference, OutsideDurationThrows) {
  const ReferenceTrajectory r(of(ScenarioKind::kHover));
  try {
    r.at(-0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kDomain);
  }
  EXPECT_THROW(r.at(60.5), Error);
}

TEST(Reference, CircleRateAndGeometry) {
  const Scenario s = of(ScenarioKind::kCircle);
  const ReferenceTrajectory r(s);
  const double period = 2.0 * std::numbers::pi * s.circle_radius / s.circle_speed;
  EXPECT_NEAR(period, 6.283185307179586, 1e-12);
  for (double t = 0.0; t < 20.0; t += 0.37) {
    const Setpoint sp = r.at(t);
    EXPECT_NEAR((sp.position - s.circle_center).norm(), 1.5, 1e-12);
    EXPECT_NEAR(sp.velocity.norm(), 1.5, 1e-12);
    EXPECT_NEAR(sp.velocity.dot(sp.position - s.circle_center), 0.0, 1e-12);
    EXPECT_LT((slope(r, t + 0.1) - r.at(t + 0.1).velocity).norm(), 1e-6);
    // Angular rate v / r = 1 rad/s.
    const Vector3d rel = sp.position - s.circle_center;
    EXPECT_NEAR(wrap_angle(std::atan2(rel.y(), rel.x()) - t), 0.0, 1e-12);
  }
  EXPECT_LT((r.at(period).position - r.at(0.0).position).norm(), 1e-12);
}

TEST(Reference, CircleTangentHeading) {
  Scenario s = of(ScenarioKind::kCircle);
  s.yaw_mode = YawMode::kTangent;
  const ReferenceTrajectory r(s);
  for (double t : {0.0, 1.0, 4.0, 10.0}) {
    const Setpoint sp = r.at(t);
    EXPECT_NEAR(wrap_angle(sp.heading - std::atan2(sp.velocity.y(), sp.velocity.x())), 0.0, 1e-12);
  }
}

TEST(Reference, WaypointCruiseAtCap) {
  Scenario s = of(ScenarioKind::kWaypoint);
  s.waypoints = {{0, 0, 1.5}, {2.5, 0, 1.5}};
  s.max_accel = 1.0;
  const ReferenceTrajectory r(s);
  double peak = 0.0;
  int at_cap = 0;
  for (double t = 0.0; t <= s.duration; t += 0.01) {
    const double v = r.at(t).velocity.norm();
    peak = std::max(peak, v);
    if (v == 1.25) ++at_cap;
  }
  EXPECT_EQ(peak, 1.25);
  EXPECT_GT(at_cap, 50);  // 0.75 s of cruise
  EXPECT_EQ(r.at(s.duration).position, Vector3d(2.5, 0, 1.5));
}

TEST(Reference, WaypointDefaults) {
  const Scenario s = of(ScenarioKind::kWaypoint);
  const ReferenceTrajectory r(s);
  EXPECT_EQ(r.speed_limit(), 1.25);
  double peak = 0.0;
  for (double t = 0.0; t <= s.duration; t += 0.005) {
    const Setpoint sp = r.at(t);
    peak = std::max(peak, sp.velocity.norm());
    if (t > 0.01 && t < s.duration - 0.01) {
      EXPECT_LT((slope(r, t) - sp.velocity).norm(), 1e-5) << t;
    }
  }
  EXPECT_EQ(peak, 1.25);
  EXPECT_EQ(r.at(0.0).position, s.waypoints.front());
  EXPECT_EQ(r.at(s.duration).position, s.waypoints.back());
}

TEST(Reference, ShortLegIsTriangular) {
  Scenario s = of(ScenarioKind::kWaypoint);
  s.waypoints = {{0, 0, 1}, {1, 0, 1}};
  s.max_accel = 1.0;
  const ReferenceTrajectory r(s);
  double peak = 0.0;
  for (double t = 0.0; t <= s.duration; t += 0.001) peak = std::max(peak, r.at(t).velocity.norm());
  EXPECT_NEAR(peak, 1.0, 1e-3);  // sqrt(L a)
}

TEST(Reference, StarVisitsEverySecondVertex) {
  const Scenario s = of(ScenarioKind::kStar);
  const auto path = star_path(s);
  ASSERT_EQ(path.size(), 6U);
  EXPECT_LT((path.front() - Vector3d(0, 1.5, 1.5)).norm(), 1e-12);
  EXPECT_EQ(path.front(), path.back());
  const double chord = 2.0 * 1.5 * std::sin(2.0 * std::numbers::pi / 5.0);
  for (std::size_t i = 1; i < path.size(); ++i) {
    EXPECT_NEAR((path[i] - path[i - 1]).norm(), chord, 1e-12);
  }
}

TEST(Reference, StarContinuousAndCapped) {
  const Scenario s = of(ScenarioKind::kStar);
  const ReferenceTrajectory r(s);
  double peak = 0.0;
  Vector3d last = r.at(0.0).position;
  for (double t = 0.0; t <= s.duration; t += 0.002) {
    const Setpoint sp = r.at(t);
    peak = std::max(peak, sp.velocity.norm());
    EXPECT_LT((sp.position - last).norm(), 1.25 * 0.002 + 1e-12);
    last = sp.position;
  }
  EXPECT_EQ(peak, 1.25);
}

TEST(Scenario, ProblemsAreCollected) {
  Scenario s = of(ScenarioKind::kWaypoint);
  s.waypoints = {{0, 0, 1}};
  s.max_speed = -1.0;
  s.circle_radius = 0.0;
  std::vector<std::string> problems;
  s.collect_problems(problems);
  EXPECT_GE(problems.size(), 3U);
}

#include "tailsitter/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "tailsitter/error.hpp"
#include "tailsitter/rotation.hpp"

namespace tailsitter {

std::string_view scenario_name(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kHover:
      return "hover";
    case ScenarioKind::kWaypoint:
      return "waypoint";
    case ScenarioKind::kCircle:
      return "circle";
    case ScenarioKind::kStar:
      return "star";
  }
  return "?";
}

std::string_view yaw_mode_name(YawMode mode) {
  return mode == YawMode::kConstant ? "constant" : "tangent";
}

void Scenario::collect_problems(std::vector<std::string>& problems) const {
  auto positive = [&](const char* name, double v) {
    if (!(std::isfinite(v) && v > 0.0)) problems.push_back(std::string(name) + " must be finite and > 0");
  };
  positive("duration", duration);
  positive("max_speed", max_speed);
  positive("max_accel", max_accel);
  positive("star_accel", star_accel);
  positive("circle_radius", circle_radius);
  positive("circle_speed", circle_speed);
  positive("star_radius", star_radius);
  positive("star_speed", star_speed);
  if (!(dwell >= 0.0 && std::isfinite(dwell))) problems.emplace_back("dwell must be finite and >= 0");
  if (star_vertices < 5) problems.emplace_back("star_vertices must be >= 5");
  if (kind == ScenarioKind::kWaypoint && waypoints.size() < 2) {
    problems.emplace_back("waypoints needs at least two points");
  }
  for (const auto& w : waypoints) {
    if (!w.allFinite()) problems.emplace_back("waypoints must be finite");
  }
  if (!std::isfinite(yaw)) problems.emplace_back("yaw must be finite");
}

std::vector<Vector3d> star_path(const Scenario& s) {
  std::vector<Vector3d> path;
  const int n = s.star_vertices;
  int k = 0;
  do {
    const double angle = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / n;
    path.push_back(s.star_center + s.star_radius * Vector3d(std::cos(angle), std::sin(angle), 0.0));
    k = (k + 2) % n;
  } while (k != 0);
  path.push_back(path.front());
  return path;
}

ReferenceTrajectory::ReferenceTrajectory(const Scenario& scenario) : scenario_(scenario) {
  std::vector<Vector3d> points;
  double speed = scenario.max_speed;
  double accel = scenario.max_accel;
  if (scenario.kind == ScenarioKind::kWaypoint) {
    points = scenario.waypoints;
  } else if (scenario.kind == ScenarioKind::kStar) {
    points = star_path(scenario);
    speed = scenario.star_speed;
    accel = scenario.star_accel;
  }
  double t = scenario.dwell;
  for (std::size_t i = 1; i < points.size(); ++i) {
    Leg leg{};
    leg.start_time = t;
    leg.from = points[i - 1];
    const Vector3d delta = points[i] - points[i - 1];
    leg.length = delta.norm();
    leg.direction = leg.length > 0.0 ? Vector3d(delta / leg.length) : Vector3d::UnitX();
    const double a = accel;
    if (leg.length >= speed * speed / a) {
      leg.cruise_speed = speed;
      leg.accel_time = speed / a;
      leg.cruise_time = (leg.length - speed * speed / a) / speed;
    } else {
      leg.cruise_speed = std::sqrt(leg.length * a);
      leg.accel_time = leg.cruise_speed / a;
      leg.cruise_time = 0.0;
    }
    leg.heading = std::atan2(leg.direction.y(), leg.direction.x());
    legs_.push_back(leg);
    t += 2.0 * leg.accel_time + leg.cruise_time + scenario.dwell;
  }
}

double ReferenceTrajectory::speed_limit() const {
  switch (scenario_.kind) {
    case ScenarioKind::kHover:
      return 0.0;
    case ScenarioKind::kWaypoint:
      return scenario_.max_speed;
    case ScenarioKind::kCircle:
      return scenario_.circle_speed;
    case ScenarioKind::kStar:
      return scenario_.star_speed;
  }
  return 0.0;
}

Setpoint ReferenceTrajectory::along_path(double t) const {
  const auto heading = [&](double tangent) {
    return wrap_angle(scenario_.yaw_mode == YawMode::kTangent ? tangent + scenario_.yaw : scenario_.yaw);
  };
  // Before the first leg: hold at its start, facing along it.
  const Leg* active = &legs_.front();
  for (const Leg& leg : legs_) {
    if (t >= leg.start_time) active = &leg;
  }
  const Leg& leg = *active;
  const double tau = std::max(0.0, t - leg.start_time);
  const double ta = leg.accel_time;
  const double tc = leg.cruise_time;
  const double a = leg.cruise_speed / (ta > 0.0 ? ta : 1.0);
  double s = 0.0;
  double v = 0.0;
  if (tau < ta) {
    s = 0.5 * a * tau * tau;
    v = a * tau;
  } else if (tau < ta + tc) {
    s = 0.5 * a * ta * ta + leg.cruise_speed * (tau - ta);
    v = leg.cruise_speed;
  } else if (tau < 2.0 * ta + tc) {
    const double rem = 2.0 * ta + tc - tau;
    s = leg.length - 0.5 * a * rem * rem;
    v = a * rem;
  } else {
    s = leg.length;
    v = 0.0;
  }
  return {leg.from + s * leg.direction, v * leg.direction, heading(leg.heading)};
}

Setpoint ReferenceTrajectory::at(double t) const {
  if (!(t >= 0.0 && t <= scenario_.duration)) {
    throw Error(ErrorCategory::kDomain,
                "reference time " + std::to_string(t) + " s outside [0, duration]");
  }
  switch (scenario_.kind) {
    case ScenarioKind::kHover:
      return {scenario_.hold_position, Vector3d::Zero(), wrap_angle(scenario_.yaw)};
    case ScenarioKind::kCircle: {
      const double rate = scenario_.circle_speed / scenario_.circle_radius;
      const double angle = rate * t;
      const Vector3d radial(std::cos(angle), std::sin(angle), 0.0);
      const Vector3d tangent(-std::sin(angle), std::cos(angle), 0.0);
      const double path_heading = angle + std::numbers::pi / 2.0;
      return {scenario_.circle_center + scenario_.circle_radius * radial,
              scenario_.circle_speed * tangent,
              wrap_angle(scenario_.yaw_mode == YawMode::kTangent ? path_heading + scenario_.yaw
                                                                 : scenario_.yaw)};
    }
    case ScenarioKind::kWaypoint:
    case ScenarioKind::kStar:
      return along_path(t);
  }
  return {};
}

Setpoint reference(double t, const Scenario& scenario) { return ReferenceTrajectory(scenario).at(t); }

}  // namespace tailsitter

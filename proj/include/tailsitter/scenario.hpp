#pragma once

#include <string_view>
#include <vector>

#include "tailsitter/control.hpp"

namespace tailsitter {

enum class ScenarioKind { kHover, kWaypoint, kCircle, kStar };
enum class YawMode { kConstant, kTangent };

std::string_view scenario_name(ScenarioKind kind);
std::string_view yaw_mode_name(YawMode mode);

struct Scenario {
  ScenarioKind kind = ScenarioKind::kHover;
  double duration = 60.0;  // s

  Vector3d hold_position{0.0, 0.0, 1.5};

  // A pitch-plane transition along x, then a roll-plane one along y.
  std::vector<Vector3d> waypoints{{0.0, 0.0, 1.5}, {8.0, 0.0, 1.5}, {8.0, 8.0, 1.5}};
  double max_speed = 1.25;  // m/s
  // The position loop has no acceleration feedforward, so the achieved speed overshoots a
  // trapezoid by roughly 7% at 0.25 m/s^2 and 19% at 1 m/s^2.
  double max_accel = 0.25;  // m/s^2
  double dwell = 2.0;       // s, hold before the first leg and after each leg

  Vector3d circle_center{0.0, 0.0, 1.5};
  double circle_radius = 1.5;  // m
  double circle_speed = 1.5;   // m/s, counter-clockwise seen from above

  Vector3d star_center{0.0, 0.0, 1.5};
  int star_vertices = 5;
  double star_radius = 1.5;  // m, circumradius
  double star_speed = 1.25;  // m/s
  double star_accel = 1.0;   // m/s^2

  YawMode yaw_mode = YawMode::kConstant;
  double yaw = 0.0;  // rad; constant heading, or offset added to the path tangent

  /// Appends a message per violated invariant.
  void collect_problems(std::vector<std::string>& problems) const;
};

/// Time-parameterised reference for a scenario. Waypoint and star legs follow a
/// trapezoidal speed profile and come to rest at every vertex.
class ReferenceTrajectory {
 public:
  explicit ReferenceTrajectory(const Scenario& scenario);

  /// Throws Error(kDomain) outside [0, duration].
  Setpoint at(double t) const;

  /// Largest speed the reference can command.
  double speed_limit() const;

 private:
  struct Leg {
    double start_time;
    Vector3d from;
    Vector3d direction;  // unit
    double length;
    double cruise_speed;
    double accel_time;
    double cruise_time;
    double heading;
  };

  Setpoint along_path(double t) const;

  Scenario scenario_;
  std::vector<Leg> legs_;
};

/// Star vertices in traversal order (every second vertex), closing back on the first.
std::vector<Vector3d> star_path(const Scenario& scenario);

/// Convenience wrapper building a trajectory per call.
Setpoint reference(double t, const Scenario& scenario);

}  // namespace tailsitter

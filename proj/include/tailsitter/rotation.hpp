#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace tailsitter {

/// Wraps an angle to (-pi, pi].
double wrap_angle(double angle);

/// Active rotation by `psi` about the world vertical.
Eigen::Matrix3d heading_rotation(double psi);

/// (roll, pitch, yaw) such that R = Rz(yaw) Ry(pitch) Rx(roll).
Eigen::Vector3d euler_zyx(const Eigen::Matrix3d& rotation);

/// Rotation vector (axis * angle) of R, angle in [0, pi].
Eigen::Vector3d rotation_log(const Eigen::Matrix3d& rotation);

bool is_rotation(const Eigen::Matrix3d& rotation, double tolerance = 1e-9);

}  // namespace tailsitter

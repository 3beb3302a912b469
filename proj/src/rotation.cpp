#include "tailsitter/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tailsitter {

double wrap_angle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle, kTwoPi);
  if (wrapped <= -std::numbers::pi) wrapped += kTwoPi;
  if (wrapped > std::numbers::pi) wrapped -= kTwoPi;
  return wrapped;
}

Eigen::Matrix3d heading_rotation(double psi) {
  return Eigen::AngleAxisd(psi, Eigen::Vector3d::UnitZ()).toRotationMatrix();
}

Eigen::Vector3d euler_zyx(const Eigen::Matrix3d& r) {
  const double sin_pitch = std::clamp(-r(2, 0), -1.0, 1.0);
  return {std::atan2(r(2, 1), r(2, 2)), std::asin(sin_pitch), std::atan2(r(1, 0), r(0, 0))};
}

Eigen::Vector3d rotation_log(const Eigen::Matrix3d& rotation) {
  const Eigen::AngleAxisd aa(rotation);
  return aa.axis() * aa.angle();
}

bool is_rotation(const Eigen::Matrix3d& rotation, double tolerance) {
  return (rotation * rotation.transpose() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <=
             tolerance &&
         std::abs(rotation.determinant() - 1.0) <= tolerance;
}

}  // namespace tailsitter

#pragma once

// Least-squares identification of the propulsion and elevon constants from static
// load-cell records of a single propeller/elevon unit.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tailsitter/vehicle_model.hpp"

namespace tailsitter::sysid {

struct StaticTestRecord {
  double omega = 0.0;  // rad/s
  double delta = 0.0;  // rad
  Vector3d force = Vector3d::Zero();   // N, unit frame
  Vector3d torque = Vector3d::Zero();  // N m, unit frame
};

enum class Constant { kThrust, kMoment, kLift, kDrag, kPitch };

inline constexpr std::array<Constant, 5> kAllConstants{Constant::kThrust, Constant::kMoment,
                                                       Constant::kLift, Constant::kDrag,
                                                       Constant::kPitch};

/// Configuration key of a constant: "k_t", "k_m", "k_l", "k_d" or "k_p".
std::string_view constant_key(Constant c);

struct ConstantFit {
  bool identified = false;
  double value = 0.0;
  double residual_rms = 0.0;  // of the regression that produced the constant
  double std_error = 0.0;
  double bias = 0.0;  // only populated in intercept mode
};

struct FitResult {
  std::array<ConstantFit, 5> constants;

  const ConstantFit& operator[](Constant c) const { return constants[static_cast<int>(c)]; }
  ConstantFit& operator[](Constant c) { return constants[static_cast<int>(c)]; }

  std::vector<Constant> unidentified() const;
  /// Throws Error(kInsufficientExcitation) naming every constant that could not be fitted.
  void require_complete() const;
  /// Copies the identified constants into `params`.
  VehicleParams apply_to(VehicleParams params) const;
};

struct FitOptions {
  /// Fit an intercept alongside each slope and report it as `bias` (diagnostic only).
  bool intercept = false;
  /// Reaction-torque sign of the tested unit: +1 for a left propeller, -1 for a right one.
  double reaction_sign = 1.0;
};

/// Regressions through the origin:
///   f_z = -k_t w^2 + k_d w^2 d^2,  m_z = s k_m w^2,  f_x = -k_l w^2 d,  m_y = -k_p w^2 d.
/// Needs at least two distinct propeller speeds. Constants without excitation (for example
/// every deflection zero) come back with `identified == false`.
/// Throws Error(kInsufficientExcitation) if fewer than two distinct speeds are present.
FitResult fit_params(const std::vector<StaticTestRecord>& records, const FitOptions& options = {});

struct NoiseSpec {
  double relative_std = 0.0;  // multiplicative Gaussian noise on every measured component
};

/// Evaluates the unit wrench on the full grid (omega major, delta minor) and adds noise.
std::vector<StaticTestRecord> generate_synthetic(const VehicleParams& params,
                                                 const std::vector<double>& omega_grid,
                                                 const std::vector<double>& delta_grid,
                                                 const NoiseSpec& noise, std::uint64_t seed,
                                                 Side side = Side::kLeft);

/// 300..790 rad/s in six steps and -0.4..0.4 rad in nine steps.
std::vector<double> default_omega_grid();
std::vector<double> default_delta_grid();

inline constexpr std::string_view kCsvHeader = "omega_rad_s, delta_rad, fx, fy, fz, mx, my, mz";

void write_csv(std::ostream& out, const std::vector<StaticTestRecord>& records);
/// Throws Error(kIo) on a malformed header or row.
std::vector<StaticTestRecord> read_csv(std::istream& in);

/// Flat `key = value` file loadable as a configuration overlay.
void write_param_file(std::ostream& out, const FitResult& result);

}  // namespace tailsitter::sysid

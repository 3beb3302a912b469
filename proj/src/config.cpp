#include "tailsitter/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "tailsitter/dynamics.hpp"
#include "tailsitter/error.hpp"

namespace tailsitter {

namespace {

struct KeySpec {
  std::string name;
  bool required;
  std::function<void(Config&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("'" + text + "' is not a number");
  }
  if (used != text.size()) throw std::invalid_argument("'" + text + "' is not a number");
  return v;
}

std::string format_double(double v) { return fmt::format("{}", v); }

template <typename Access>
KeySpec number(std::string name, bool required, Access access) {
  return {std::move(name), required,
          [access](Config& c, const std::string& v) { access(c) = parse_double(v); },
          [access](const Config& c) { return format_double(access(const_cast<Config&>(c))); }};
}

template <typename Access>
KeySpec integer(std::string name, Access access) {
  return {std::move(name), false,
          [access](Config& c, const std::string& v) {
            std::size_t used = 0;
            long long parsed = 0;
            try {
              parsed = std::stoll(v, &used);
            } catch (const std::exception&) {
              throw std::invalid_argument("'" + v + "' is not an integer");
            }
            if (used != v.size()) throw std::invalid_argument("'" + v + "' is not an integer");
            access(c) = static_cast<std::remove_reference_t<decltype(access(c))>>(parsed);
          },
          [access](const Config& c) { return std::to_string(access(const_cast<Config&>(c))); }};
}

std::vector<Vector3d> parse_points(const std::string& text) {
  std::vector<Vector3d> points;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ';')) {
    if (trim(item).empty()) continue;
    std::stringstream coords(item);
    std::string c;
    std::vector<double> xyz;
    while (std::getline(coords, c, ',')) xyz.push_back(parse_double(trim(c)));
    if (xyz.size() != 3) throw std::invalid_argument("each waypoint needs three coordinates 'x, y, z'");
    points.emplace_back(xyz[0], xyz[1], xyz[2]);
  }
  return points;
}

std::string format_points(const std::vector<Vector3d>& points) {
  std::string out;
  for (const auto& p : points) {
    if (!out.empty()) out += "; ";
    out += fmt::format("{}, {}, {}", format_double(p.x()), format_double(p.y()), format_double(p.z()));
  }
  return out;
}

// clang-format off
const std::vector<KeySpec>& registry() {
  static const std::vector<KeySpec> keys = [] {
    std::vector<KeySpec> k;
    k.push_back(number("m", true, [](Config& c) -> double& { return c.vehicle.mass; }));
    k.push_back(number("l", true, [](Config& c) -> double& { return c.vehicle.arm_length; }));
    k.push_back(number("b", true, [](Config& c) -> double& { return c.vehicle.wing_span; }));
    k.push_back(number("J_xx", true, [](Config& c) -> double& { return c.vehicle.inertia.x(); }));
    k.push_back(number("J_yy", true, [](Config& c) -> double& { return c.vehicle.inertia.y(); }));
    k.push_back(number("J_zz", true, [](Config& c) -> double& { return c.vehicle.inertia.z(); }));
    k.push_back(number("k_t", true, [](Config& c) -> double& { return c.vehicle.k_thrust; }));
    k.push_back(number("k_m", true, [](Config& c) -> double& { return c.vehicle.k_moment; }));
    k.push_back(number("k_l", true, [](Config& c) -> double& { return c.vehicle.k_lift; }));
    k.push_back(number("k_d", true, [](Config& c) -> double& { return c.vehicle.k_drag; }));
    k.push_back(number("k_p", true, [](Config& c) -> double& { return c.vehicle.k_pitch; }));
    k.push_back(number("tau_p_xy", true, [](Config& c) -> double& { return c.gains.tau_p_xy; }));
    k.push_back(number("tau_p_z", true, [](Config& c) -> double& { return c.gains.tau_p_z; }));
    k.push_back(number("zeta_p_xy", true, [](Config& c) -> double& { return c.gains.zeta_p_xy; }));
    k.push_back(number("zeta_p_z", true, [](Config& c) -> double& { return c.gains.zeta_p_z; }));
    k.push_back(number("tau_att", true, [](Config& c) -> double& { return c.gains.tau_att; }));
    k.push_back(number("tau_w_x", true, [](Config& c) -> double& { return c.gains.tau_rate.x(); }));
    k.push_back(number("tau_w_y", true, [](Config& c) -> double& { return c.gains.tau_rate.y(); }));
    k.push_back(number("tau_w_z", true, [](Config& c) -> double& { return c.gains.tau_rate.z(); }));
    k.push_back(number("K_I_w_x", true, [](Config& c) -> double& { return c.gains.ki_rate.x(); }));
    k.push_back(number("K_I_w_y", true, [](Config& c) -> double& { return c.gains.ki_rate.y(); }));
    k.push_back(number("K_I_w_z", true, [](Config& c) -> double& { return c.gains.ki_rate.z(); }));

    k.push_back(number("omega_max", false, [](Config& c) -> double& { return c.vehicle.omega_max; }));
    k.push_back(number("delta_max", false, [](Config& c) -> double& { return c.vehicle.delta_max; }));
    k.push_back(number("g_mag", false, [](Config& c) -> double& { return c.vehicle.gravity; }));
    k.push_back(number("tau_motor", false, [](Config& c) -> double& { return c.actuators.tau_motor; }));
    k.push_back(number("tau_servo", false, [](Config& c) -> double& { return c.actuators.tau_servo; }));

    k.push_back(number("physics_rate_hz", false, [](Config& c) -> double& { return c.rates.physics_hz; }));
    k.push_back(number("imu_rate_hz", false, [](Config& c) -> double& { return c.rates.imu_hz; }));
    k.push_back(number("pose_rate_hz", false, [](Config& c) -> double& { return c.rates.pose_hz; }));
    k.push_back(number("log_rate_hz", false, [](Config& c) -> double& { return c.rates.log_hz; }));
    k.push_back(number("position_rate_hz", false, [](Config& c) -> double& { return c.loops.position_hz; }));
    k.push_back(number("attitude_rate_hz", false, [](Config& c) -> double& { return c.loops.attitude_hz; }));
    k.push_back(number("rate_rate_hz", false, [](Config& c) -> double& { return c.loops.rate_hz; }));

    k.push_back({"estimator", false,
                 [](Config& c, const std::string& v) {
                   if (v == "perfect") c.estimator = EstimatorMode::kPerfect;
                   else if (v == "complementary") c.estimator = EstimatorMode::kComplementary;
                   else throw std::invalid_argument("expected 'perfect' or 'complementary'");
                 },
                 [](const Config& c) {
                   return std::string(c.estimator == EstimatorMode::kPerfect ? "perfect" : "complementary");
                 }});
    k.push_back(number("lowpass_cutoff_hz", false, [](Config& c) -> double& { return c.estimator_gains.lowpass_cutoff_hz; }));
    k.push_back(number("est_attitude_blend", false, [](Config& c) -> double& { return c.estimator_gains.attitude_blend; }));
    k.push_back(number("est_position_alpha", false, [](Config& c) -> double& { return c.estimator_gains.position_alpha; }));
    k.push_back(number("est_position_beta", false, [](Config& c) -> double& { return c.estimator_gains.position_beta; }));

    k.push_back(integer("seed", [](Config& c) -> std::uint64_t& { return c.disturbance.seed; }));
    k.push_back(number("gyro_noise_std", false, [](Config& c) -> double& { return c.disturbance.gyro_noise_std; }));
    k.push_back(number("accel_noise_std", false, [](Config& c) -> double& { return c.disturbance.accel_noise_std; }));
    k.push_back(number("pose_position_noise_std", false, [](Config& c) -> double& { return c.disturbance.pose_position_noise_std; }));
    k.push_back(number("pose_attitude_noise_std", false, [](Config& c) -> double& { return c.disturbance.pose_attitude_noise_std; }));
    k.push_back(number("torque_noise_std_x", false, [](Config& c) -> double& { return c.disturbance.torque_noise_std.x(); }));
    k.push_back(number("torque_noise_std_y", false, [](Config& c) -> double& { return c.disturbance.torque_noise_std.y(); }));
    k.push_back(number("torque_noise_std_z", false, [](Config& c) -> double& { return c.disturbance.torque_noise_std.z(); }));
    k.push_back(number("torque_noise_tau", false, [](Config& c) -> double& { return c.disturbance.torque_noise_tau; }));
    k.push_back(number("force_offset_x", false, [](Config& c) -> double& { return c.disturbance.force_offset_world.x(); }));
    k.push_back(number("force_offset_y", false, [](Config& c) -> double& { return c.disturbance.force_offset_world.y(); }));
    k.push_back(number("force_offset_z", false, [](Config& c) -> double& { return c.disturbance.force_offset_world.z(); }));
    k.push_back(number("torque_offset_x", false, [](Config& c) -> double& { return c.disturbance.torque_offset_body.x(); }));
    k.push_back(number("torque_offset_y", false, [](Config& c) -> double& { return c.disturbance.torque_offset_body.y(); }));
    k.push_back(number("torque_offset_z", false, [](Config& c) -> double& { return c.disturbance.torque_offset_body.z(); }));
    k.push_back(number("gyro_bias_x", false, [](Config& c) -> double& { return c.disturbance.gyro_bias.x(); }));
    k.push_back(number("gyro_bias_y", false, [](Config& c) -> double& { return c.disturbance.gyro_bias.y(); }));
    k.push_back(number("gyro_bias_z", false, [](Config& c) -> double& { return c.disturbance.gyro_bias.z(); }));

    k.push_back({"scenario", false,
                 [](Config& c, const std::string& v) {
                   if (v == "hover") c.scenario.kind = ScenarioKind::kHover;
                   else if (v == "waypoint") c.scenario.kind = ScenarioKind::kWaypoint;
                   else if (v == "circle") c.scenario.kind = ScenarioKind::kCircle;
                   else if (v == "star") c.scenario.kind = ScenarioKind::kStar;
                   else throw std::invalid_argument("expected hover, waypoint, circle or star");
                 },
                 [](const Config& c) { return std::string(scenario_name(c.scenario.kind)); }});
    k.push_back(number("duration", false, [](Config& c) -> double& { return c.scenario.duration; }));
    k.push_back(number("hold_x", false, [](Config& c) -> double& { return c.scenario.hold_position.x(); }));
    k.push_back(number("hold_y", false, [](Config& c) -> double& { return c.scenario.hold_position.y(); }));
    k.push_back(number("hold_z", false, [](Config& c) -> double& { return c.scenario.hold_position.z(); }));
    k.push_back({"waypoints", false,
                 [](Config& c, const std::string& v) { c.scenario.waypoints = parse_points(v); },
                 [](const Config& c) { return format_points(c.scenario.waypoints); }});
    k.push_back(number("max_speed", false, [](Config& c) -> double& { return c.scenario.max_speed; }));
    k.push_back(number("max_accel", false, [](Config& c) -> double& { return c.scenario.max_accel; }));
    k.push_back(number("dwell", false, [](Config& c) -> double& { return c.scenario.dwell; }));
    k.push_back(number("circle_center_x", false, [](Config& c) -> double& { return c.scenario.circle_center.x(); }));
    k.push_back(number("circle_center_y", false, [](Config& c) -> double& { return c.scenario.circle_center.y(); }));
    k.push_back(number("circle_center_z", false, [](Config& c) -> double& { return c.scenario.circle_center.z(); }));
    k.push_back(number("circle_radius", false, [](Config& c) -> double& { return c.scenario.circle_radius; }));
    k.push_back(number("circle_speed", false, [](Config& c) -> double& { return c.scenario.circle_speed; }));
    k.push_back(number("star_center_x", false, [](Config& c) -> double& { return c.scenario.star_center.x(); }));
    k.push_back(number("star_center_y", false, [](Config& c) -> double& { return c.scenario.star_center.y(); }));
    k.push_back(number("star_center_z", false, [](Config& c) -> double& { return c.scenario.star_center.z(); }));
    k.push_back(integer("star_vertices", [](Config& c) -> int& { return c.scenario.star_vertices; }));
    k.push_back(number("star_radius", false, [](Config& c) -> double& { return c.scenario.star_radius; }));
    k.push_back(number("star_speed", false, [](Config& c) -> double& { return c.scenario.star_speed; }));
    k.push_back(number("star_accel", false, [](Config& c) -> double& { return c.scenario.star_accel; }));
    k.push_back({"yaw_mode", false,
                 [](Config& c, const std::string& v) {
                   if (v == "constant") c.scenario.yaw_mode = YawMode::kConstant;
                   else if (v == "tangent") c.scenario.yaw_mode = YawMode::kTangent;
                   else throw std::invalid_argument("expected 'constant' or 'tangent'");
                 },
                 [](const Config& c) { return std::string(yaw_mode_name(c.scenario.yaw_mode)); }});
    k.push_back(number("yaw", false, [](Config& c) -> double& { return c.scenario.yaw; }));
    k.push_back(number("initial_offset_x", false, [](Config& c) -> double& { return c.initial_offset.x(); }));
    k.push_back(number("initial_offset_y", false, [](Config& c) -> double& { return c.initial_offset.y(); }));
    k.push_back(number("initial_offset_z", false, [](Config& c) -> double& { return c.initial_offset.z(); }));
    k.push_back(number("metrics_window", false, [](Config& c) -> double& { return c.metrics_window; }));
    return k;
  }();
  return keys;
}
// clang-format on

template <typename F>
void collect(std::vector<std::string>& problems, F&& check) {
  try {
    check();
  } catch (const ConfigError& e) {
    problems.insert(problems.end(), e.problems().begin(), e.problems().end());
  }
}

bool divides(double fast_hz, double slow_hz) {
  if (!(fast_hz > 0.0 && slow_hz > 0.0)) return false;
  const double ratio = fast_hz / slow_hz;
  return ratio >= 1.0 - 1e-12 && std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio;
}

}  // namespace

const std::vector<std::string>& required_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& k : registry()) {
      if (k.required) out.push_back(k.name);
    }
    return out;
  }();
  return keys;
}

void Config::validate() const {
  std::vector<std::string> problems;
  collect(problems, [&] { vehicle.validate(); });
  collect(problems, [&] { gains.validate(); });
  collect(problems, [&] { disturbance.validate(); });
  collect(problems, [&] { estimator_gains.validate(); });
  scenario.collect_problems(problems);
  if (!(actuators.tau_motor > 0.0)) problems.emplace_back("tau_motor must be > 0");
  if (!(actuators.tau_servo > 0.0)) problems.emplace_back("tau_servo must be > 0");
  if (!(rates.physics_hz * kMaxPhysicsStep >= 1.0 - 1e-12)) {
    problems.emplace_back("physics_rate_hz must be at least 500 (step <= 2 ms)");
  }
  const std::pair<const char*, double> divided[] = {
      {"imu_rate_hz", rates.imu_hz},           {"pose_rate_hz", rates.pose_hz},
      {"log_rate_hz", rates.log_hz},           {"position_rate_hz", loops.position_hz},
      {"attitude_rate_hz", loops.attitude_hz}, {"rate_rate_hz", loops.rate_hz}};
  for (const auto& [name, hz] : divided) {
    if (!divides(rates.physics_hz, hz)) {
      problems.push_back(std::string(name) + " must be positive and divide physics_rate_hz evenly");
    }
  }
  if (divides(rates.physics_hz, rates.imu_hz) && divides(rates.physics_hz, rates.pose_hz) &&
      !divides(rates.imu_hz, rates.pose_hz)) {
    problems.emplace_back("pose_rate_hz must divide imu_rate_hz evenly");
  }
  if (!(metrics_window >= 0.0 && std::isfinite(metrics_window))) {
    problems.emplace_back("metrics_window must be finite and >= 0");
  }
  if (!initial_offset.allFinite()) problems.emplace_back("initial offset must be finite");
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

KeyValues parse_key_values(std::istream& in, const std::string& source_name) {
  KeyValues values;
  std::vector<std::string> problems;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      problems.push_back(fmt::format("{}:{}: expected 'key = value'", source_name, line_no));
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      problems.push_back(fmt::format("{}:{}: empty key or value", source_name, line_no));
      continue;
    }
    values[key] = value;
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return values;
}

Config apply_key_values(const KeyValues& values, Config base, bool require_table_keys) {
  std::vector<std::string> problems;
  if (require_table_keys) {
    for (const auto& key : required_keys()) {
      if (!values.contains(key)) problems.push_back("missing required key " + key);
    }
  }
  const auto& keys = registry();
  for (const auto& [name, value] : values) {
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.name == name; });
    if (it == keys.end()) {
      problems.push_back("unknown key " + name);
      continue;
    }
    try {
      it->set(base, value);
    } catch (const std::invalid_argument& e) {
      problems.push_back(name + ": " + e.what());
    }
  }
  if (problems.empty()) collect(problems, [&] { base.validate(); });
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return base;
}

Config load_config(const std::vector<std::string>& paths) {
  KeyValues merged;
  std::vector<std::string> problems;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCategory::kIo, "cannot open configuration file " + path);
    try {
      for (auto& [k, v] : parse_key_values(in, path)) merged[k] = v;
    } catch (const ConfigError& e) {
      problems.insert(problems.end(), e.problems().begin(), e.problems().end());
    }
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return apply_key_values(merged, Config{}, !paths.empty());
}

void write_config(std::ostream& out, const Config& config) {
  for (const auto& k : registry()) out << k.name << " = " << k.get(config) << '\n';
}

}  // namespace tailsitter

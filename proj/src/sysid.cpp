#include "tailsitter/sysid.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "tailsitter/error.hpp"

namespace tailsitter::sysid {

namespace {

struct Regression {
  Eigen::VectorXd coefficients;  // slopes, then the intercept if requested
  Eigen::VectorXd std_errors;
  double residual_rms = 0.0;
};

Regression solve(const Eigen::MatrixXd& design, const Eigen::VectorXd& target) {
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  Regression r;
  r.coefficients = qr.solve(target);
  const Eigen::VectorXd residual = target - design * r.coefficients;
  const auto n = design.rows();
  const auto p = design.cols();
  const double rss = residual.squaredNorm();
  r.residual_rms = std::sqrt(rss / static_cast<double>(n));
  r.std_errors = Eigen::VectorXd::Zero(p);
  if (n > p) {
    const double sigma2 = rss / static_cast<double>(n - p);
    const Eigen::MatrixXd cov =
        sigma2 * (design.transpose() * design).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
    r.std_errors = cov.diagonal().cwiseMax(0.0).cwiseSqrt();
  }
  return r;
}

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& slopes, bool intercept) {
  if (!intercept) return slopes;
  Eigen::MatrixXd out(slopes.rows(), slopes.cols() + 1);
  out << slopes, Eigen::VectorXd::Ones(slopes.rows());
  return out;
}

bool full_rank(const Eigen::MatrixXd& design) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  return qr.rank() == design.cols();
}

void store(ConstantFit& fit, const Regression& r, Eigen::Index column, double sign, bool intercept) {
  fit.identified = true;
  fit.value = sign * r.coefficients[column];
  fit.std_error = r.std_errors[column];
  fit.residual_rms = r.residual_rms;
  if (intercept) fit.bias = r.coefficients[r.coefficients.size() - 1];
}

// Single regressor y = sign * k * x (+ bias).
void fit_single(ConstantFit& fit, const Eigen::VectorXd& regressor, const Eigen::VectorXd& target,
                double sign, bool intercept) {
  const Eigen::MatrixXd design = with_intercept(regressor, intercept);
  if (!full_rank(design)) return;
  store(fit, solve(design, target), 0, sign, intercept);
}

double perturb(double value, double relative_std, std::normal_distribution<double>& n, std::mt19937_64& rng) {
  if (relative_std == 0.0) return value;
  return value * (1.0 + relative_std * n(rng));
}

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c != ' ' && c != '\t' && c != '\r') out.push_back(c);
  }
  return out;
}

}  // namespace

std::string_view constant_key(Constant c) {
  switch (c) {
    case Constant::kThrust:
      return "k_t";
    case Constant::kMoment:
      return "k_m";
    case Constant::kLift:
      return "k_l";
    case Constant::kDrag:
      return "k_d";
    case Constant::kPitch:
      return "k_p";
  }
  return "?";
}

std::vector<Constant> FitResult::unidentified() const {
  std::vector<Constant> out;
  for (Constant c : kAllConstants) {
    if (!(*this)[c].identified) out.push_back(c);
  }
  return out;
}

void FitResult::require_complete() const {
  const auto missing = unidentified();
  if (missing.empty()) return;
  std::string names;
  for (Constant c : missing) {
    if (!names.empty()) names += ", ";
    names += constant_key(c);
  }
  throw Error(ErrorCategory::kInsufficientExcitation, "not identifiable from the records: " + names);
}

VehicleParams FitResult::apply_to(VehicleParams params) const {
  const auto set = [&](Constant c, double& field) {
    if ((*this)[c].identified) field = (*this)[c].value;
  };
  set(Constant::kThrust, params.k_thrust);
  set(Constant::kMoment, params.k_moment);
  set(Constant::kLift, params.k_lift);
  set(Constant::kDrag, params.k_drag);
  set(Constant::kPitch, params.k_pitch);
  return params;
}

FitResult fit_params(const std::vector<StaticTestRecord>& records, const FitOptions& options) {
  std::set<double> speeds;
  for (const auto& r : records) {
    if (!(r.omega >= 0.0) || !r.force.allFinite() || !r.torque.allFinite() || !std::isfinite(r.delta)) {
      throw Error(ErrorCategory::kDomain, "static test record with negative speed or non-finite values");
    }
    speeds.insert(r.omega);
  }
  if (speeds.size() < 2) {
    throw Error(ErrorCategory::kInsufficientExcitation,
                "at least two distinct propeller speeds are required (k_t, k_m, k_l, k_d, k_p)");
  }

  const auto n = static_cast<Eigen::Index>(records.size());
  Eigen::VectorXd w2(n), w2d(n), w2d2(n), fx(n), fz(n), my(n), mz(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = records[static_cast<std::size_t>(i)];
    const double s = r.omega * r.omega;
    w2[i] = s;
    w2d[i] = s * r.delta;
    w2d2[i] = s * r.delta * r.delta;
    fx[i] = r.force.x();
    fz[i] = r.force.z();
    my[i] = r.torque.y();
    mz[i] = r.torque.z();
  }

  FitResult result;
  const bool icpt = options.intercept;

  // Thrust and drag share the z force channel, so they are fitted jointly when the
  // drag regressor is excited and thrust alone otherwise.
  Eigen::MatrixXd thrust_drag(n, 2);
  thrust_drag << w2, w2d2;
  if (full_rank(with_intercept(thrust_drag, icpt))) {
    const Regression r = solve(with_intercept(thrust_drag, icpt), fz);
    store(result[Constant::kThrust], r, 0, -1.0, icpt);
    store(result[Constant::kDrag], r, 1, 1.0, icpt);
  } else if (w2d2.cwiseAbs().maxCoeff() == 0.0) {
    fit_single(result[Constant::kThrust], w2, fz, -1.0, icpt);
  }

  fit_single(result[Constant::kMoment], w2, mz, options.reaction_sign, icpt);
  fit_single(result[Constant::kLift], w2d, fx, -1.0, icpt);
  fit_single(result[Constant::kPitch], w2d, my, -1.0, icpt);
  return result;
}

std::vector<StaticTestRecord> generate_synthetic(const VehicleParams& params,
                                                 const std::vector<double>& omega_grid,
                                                 const std::vector<double>& delta_grid,
                                                 const NoiseSpec& noise, std::uint64_t seed, Side side) {
  if (omega_grid.empty() || delta_grid.empty()) {
    throw Error(ErrorCategory::kDomain, "synthetic grids must be nonempty");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<StaticTestRecord> out;
  out.reserve(omega_grid.size() * delta_grid.size());
  for (double omega : omega_grid) {
    for (double delta : delta_grid) {
      const Wrench w = prop_wrench(omega, side, params) + aero_wrench(omega, delta, params);
      StaticTestRecord rec{omega, delta, w.force, w.torque};
      for (int i = 0; i < 3; ++i) rec.force[i] = perturb(rec.force[i], noise.relative_std, gauss, rng);
      for (int i = 0; i < 3; ++i) rec.torque[i] = perturb(rec.torque[i], noise.relative_std, gauss, rng);
      out.push_back(rec);
    }
  }
  return out;
}

std::vector<double> default_omega_grid() { return {300.0, 400.0, 500.0, 600.0, 700.0, 790.0}; }

std::vector<double> default_delta_grid() {
  return {-0.4, -0.3, -0.2, -0.1, 0.0, 0.1, 0.2, 0.3, 0.4};
}

void write_csv(std::ostream& out, const std::vector<StaticTestRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", r.omega,
                       r.delta, r.force.x(), r.force.y(), r.force.z(), r.torque.x(), r.torque.y(),
                       r.torque.z());
  }
}

std::vector<StaticTestRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_spaces(line) != strip_spaces(kCsvHeader)) {
    throw Error(ErrorCategory::kIo, fmt::format("expected CSV header '{}'", kCsvHeader));
  }
  std::vector<StaticTestRecord> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::array<double, 8> v{};
    std::size_t count = 0;
    while (std::getline(row, cell, ',')) {
      if (count >= v.size()) {
        count = v.size() + 1;
        break;
      }
      try {
        std::size_t used = 0;
        const std::string t = trim(cell);
        v[count] = std::stod(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
      } catch (const std::exception&) {
        throw Error(ErrorCategory::kIo, fmt::format("line {}: '{}' is not a number", line_no, trim(cell)));
      }
      ++count;
    }
    if (count != v.size()) {
      throw Error(ErrorCategory::kIo, fmt::format("line {}: expected 8 columns", line_no));
    }
    records.push_back({v[0], v[1], Vector3d(v[2], v[3], v[4]), Vector3d(v[5], v[6], v[7])});
  }
  return records;
}

void write_param_file(std::ostream& out, const FitResult& result) {
  out << "# Propulsion and elevon constants fitted from static test records.\n";
  for (Constant c : kAllConstants) {
    const ConstantFit& fit = result[c];
    if (!fit.identified) {
      out << fmt::format("# {}: not identifiable from the records\n", constant_key(c));
      continue;
    }
    out << fmt::format("# {}: residual_rms = {:.6g}, std_error = {:.6g}", constant_key(c), fit.residual_rms,
                       fit.std_error);
    if (fit.bias != 0.0) out << fmt::format(", bias = {:.6g}", fit.bias);
    out << '\n';
    out << fmt::format("{} = {:.17g}\n", constant_key(c), fit.value);
  }
}

}  // namespace tailsitter::sysid

#include "tailsitter/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "json.hpp"

#include "tailsitter/error.hpp"
#include "tailsitter/simulation.hpp"

namespace tailsitter {

namespace {

// Axes whose reference varies less than this (std, m) do not enter the latency mean.
constexpr double kMinReferenceSpread = 1e-3;
constexpr double kMaxLatencySearch = 2.0;  // s

double spread(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  return std::sqrt(var / static_cast<double>(x.size()));
}

}  // namespace

double correlation_latency(std::span<const double> reference, std::span<const double> response,
                           double sample_period, double max_lag) {
  const std::size_t n = std::min(reference.size(), response.size());
  if (n < 3) return 0.0;
  // Pearson coefficient over the overlap at each lag; a pure delay scores exactly 1.
  const auto max_k = std::min<std::size_t>(n - 3, static_cast<std::size_t>(max_lag / sample_period));
  std::vector<double> corr(max_k + 1, 0.0);
  for (std::size_t k = 0; k <= max_k; ++k) {
    const std::size_t m = n - k;
    const Eigen::Map<const Eigen::VectorXd> x(reference.data(), static_cast<Eigen::Index>(m));
    const Eigen::Map<const Eigen::VectorXd> y(response.data() + k, static_cast<Eigen::Index>(m));
    const Eigen::VectorXd dx = x.array() - x.mean();
    const Eigen::VectorXd dy = y.array() - y.mean();
    const double norm = std::sqrt(dx.squaredNorm() * dy.squaredNorm());
    corr[k] = norm > 0.0 ? dx.dot(dy) / norm : 0.0;
  }
  const auto best = static_cast<std::size_t>(std::max_element(corr.begin(), corr.end()) - corr.begin());
  double offset = 0.0;
  if (best > 0 && best < max_k) {
    const double left = corr[best - 1];
    const double mid = corr[best];
    const double right = corr[best + 1];
    const double curvature = left - 2.0 * mid + right;
    if (curvature < 0.0) offset = 0.5 * (left - right) / curvature;
  }
  return (static_cast<double>(best) + offset) * sample_period;
}

Metrics compute_metrics(const ScenarioLog& log, double transient_window) {
  const auto first = std::find_if(log.rows.begin(), log.rows.end(), [&](const LogRow& r) {
    return r.time >= transient_window - 1e-9;
  });
  if (first == log.rows.end()) {
    throw Error(ErrorCategory::kMetricsWindow, "log ends before the transient window of " +
                                                   std::to_string(transient_window) + " s");
  }
  Metrics m;
  for (const LogRow& row : log.rows) {
    const Vector3d err = row.truth.position - row.reference.position;
    m.peak_error = m.peak_error.cwiseMax(err.cwiseAbs());
    m.peak_pitch = std::max(m.peak_pitch, std::abs(hover_relative_euler(row.truth.attitude).y()));
    m.peak_speed = std::max(m.peak_speed, row.truth.velocity.norm());
  }

  const auto count = static_cast<std::size_t>(log.rows.end() - first);
  Vector3d sum_sq = Vector3d::Zero();
  std::array<std::vector<double>, 3> ref;
  std::array<std::vector<double>, 3> pos;
  for (auto it = first; it != log.rows.end(); ++it) {
    const Vector3d err = it->truth.position - it->reference.position;
    sum_sq += err.cwiseProduct(err);
    for (int a = 0; a < 3; ++a) {
      ref[a].push_back(it->reference.position[a]);
      pos[a].push_back(it->truth.position[a]);
    }
  }
  m.rms_error = (sum_sq / static_cast<double>(count)).cwiseSqrt();

  double latency_sum = 0.0;
  int excited = 0;
  for (int a = 0; a < 3; ++a) {
    if (spread(ref[a]) < kMinReferenceSpread) continue;
    latency_sum += correlation_latency(ref[a], pos[a], 1.0 / log.log_hz, kMaxLatencySearch);
    ++excited;
  }
  m.latency = excited > 0 ? latency_sum / excited : 0.0;
  return m;
}

std::string metrics_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["rms_x_m"] = m.rms_error.x();
  j["rms_y_m"] = m.rms_error.y();
  j["rms_z_m"] = m.rms_error.z();
  j["peak_pitch_rad"] = m.peak_pitch;
  j["peak_speed_mps"] = m.peak_speed;
  j["latency_s"] = m.latency;
  j["peak_x_m"] = m.peak_error.x();
  j["peak_y_m"] = m.peak_error.y();
  j["peak_z_m"] = m.peak_error.z();
  return j.dump(2);
}

}  // namespace tailsitter

#pragma once

#include <span>
#include <string>

#include <Eigen/Core>

namespace tailsitter {

struct ScenarioLog;

struct Metrics {
  Eigen::Vector3d rms_error = Eigen::Vector3d::Zero();   // m, post-transient window
  Eigen::Vector3d peak_error = Eigen::Vector3d::Zero();  // m, whole log
  double peak_pitch = 0.0;  // rad, largest |pitch| relative to the hover pose
  double peak_speed = 0.0;  // m/s
  double latency = 0.0;     // s, mean over axes whose reference moves
};

/// Throws Error(kMetricsWindow) when no row lies at or after `transient_window`.
Metrics compute_metrics(const ScenarioLog& log, double transient_window = 5.0);

/// Lag (s) at which `response` best matches `reference` by normalized cross-correlation,
/// refined between samples by a parabola through the peak. Searches lags in [0, max_lag].
double correlation_latency(std::span<const double> reference, std::span<const double> response,
                           double sample_period, double max_lag);

/// One JSON object with keys rms_x_m, rms_y_m, rms_z_m, peak_pitch_rad, peak_speed_mps,
/// latency_s (plus the per-axis peak errors).
std::string metrics_json(const Metrics& metrics);

}  // namespace tailsitter

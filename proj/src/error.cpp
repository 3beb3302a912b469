#include "tailsitter/error.hpp"

namespace tailsitter {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kDomain:
      return "domain";
    case ErrorCategory::kSimulationDiverged:
      return "simulation-diverged";
    case ErrorCategory::kDegenerateThrust:
      return "degenerate-thrust";
    case ErrorCategory::kInfeasibleRoll:
      return "infeasible-roll";
    case ErrorCategory::kInsufficientExcitation:
      return "insufficient-excitation";
    case ErrorCategory::kMetricsWindow:
      return "metrics-window";
    case ErrorCategory::kConfig:
      return "config-invalid";
    case ErrorCategory::kIo:
      return "io";
    case ErrorCategory::kUsage:
      return "usage";
  }
  return "unknown";
}

namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = "invalid configuration";
  for (const auto& p : problems) {
    out += "\n  - ";
    out += p;
  }
  return out;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : Error(ErrorCategory::kConfig, join_problems(problems)), problems_(std::move(problems)) {}

}  // namespace tailsitter

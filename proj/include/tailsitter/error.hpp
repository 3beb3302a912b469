#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tailsitter {

enum class ErrorCategory {
  kDomain,
  kSimulationDiverged,
  kDegenerateThrust,
  kInfeasibleRoll,
  kInsufficientExcitation,
  kMetricsWindow,
  kConfig,
  kIo,
  kUsage,
};

/// Machine-readable name, e.g. "simulation-diverged".
std::string_view category_name(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

/// Carries every problem found while validating a configuration, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems);

  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

}  // namespace tailsitter

#pragma once

#include <stdexcept>
#include <string>

namespace fracstab {

/// Gamma evaluated at a nonpositive integer.
struct PoleError : std::domain_error {
  explicit PoleError(const std::string& msg) : std::domain_error(msg) {}
};

/// Argument outside the documented domain of an operation.
struct DomainError : std::domain_error {
  explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

/// No evaluation regime reached the requested accuracy within budget.
struct AccuracyError : std::runtime_error {
  explicit AccuracyError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Forcing grid does not refine the trajectory grid.
struct GridError : std::invalid_argument {
  explicit GridError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Spectrum admits no (-beta, 0) gap; the decomposition assumption fails.
struct GapError : std::invalid_argument {
  explicit GapError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Feedback gains do not strictly stabilize the unstable subsystem.
struct DesignError : std::invalid_argument {
  explicit DesignError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Sampled data too coarse for the requested truncation.
struct ResolutionError : std::invalid_argument {
  explicit ResolutionError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// Malformed or inconsistent run configuration.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fracstab

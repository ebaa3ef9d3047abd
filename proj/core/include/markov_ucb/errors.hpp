#pragma once

#include <stdexcept>
#include <string>

namespace markov_ucb {

enum class ErrorCode {
  kShapeMismatch,
  kNotStochastic,
  kReducible,
  kPeriodic,
  kNotReversible,
  kNonPositiveReward,
  kInvalidInitialDistribution,
  kDegenerateTheta,
  kInvalidState,
  kSingularSystem,
  kUndefinedIndex,
  kEmptySubset,
  kConfiguration,
};

const char* to_string(ErrorCode code);

// Raised when a chain, instance, or evaluator input violates its contract.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Experiment-level misconfiguration (horizon too short, too few arms, ...).
class ConfigError : public ValidationError {
 public:
  explicit ConfigError(const std::string& what)
      : ValidationError(ErrorCode::kConfiguration, what) {}
};

}  // namespace markov_ucb

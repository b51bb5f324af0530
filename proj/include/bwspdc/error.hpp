#pragma once

#include <stdexcept>
#include <string>

namespace bwspdc {

enum class ErrorCategory {
  ConfigError,
  IoError,
  Unsupported,
  OutOfRange,
  InvalidModel,
  NonPositiveDenominator,
  DegenerateForward,
  ZeroDecay,
  NoPositiveRoot,
  MissingCalibration,
  NotConverged,
  ShootingDiverged,
  InvalidDuration,
  EmptyStream,
  IncompatibleNormalization,
};

const char* to_string(ErrorCategory c);

// Single exception type; the CLI maps categories onto exit codes and prints
// "error category=<name> msg=..." on stderr.
class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void fail(ErrorCategory c, const std::string& msg) {
  throw Error(c, msg);
}

}  // namespace bwspdc

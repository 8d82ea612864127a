#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lsci {

enum class ErrorCode {
  GridMismatch,
  ShapeMismatch,
  InvalidArgument,
  DegenerateCovariance,
  DegenerateWeights,
  Unsupported,
  EmptyMeasure,
  EmptyCalibration,
  EmptyEnsemble,
  InvalidU,
  AcceptanceStalled,
  SingularSystem,
  NotFitted,
  InsufficientCalibration,
  Io,
  Parse,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lsci

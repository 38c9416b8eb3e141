#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gptkit {

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NumericalFailure,
  NotAState,
  SingularMap,
  UnsupportedKind,
  ScaleLimit,
  InvalidTable,
  InvalidSetup,
  EmptySubset,
  WrongSlitCount,
  InvalidKraus,
  NotUnitary,
  TooFewSamples,
};

std::string_view to_string(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so that
/// front ends can map it onto an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace gptkit

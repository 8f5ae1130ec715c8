#pragma once

#include <stdexcept>
#include <string>

namespace bemery {

enum class ErrorCode {
  invalid_argument = 1,
  unknown_vertex,
  domain_mismatch,
  validation,
  parse,
  precondition,
};

// Every failure raised by the core is an Error carrying one of the codes
// above; the C API maps them one-to-one onto bem_status values.
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

}  // namespace bemery

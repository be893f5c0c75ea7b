#pragma once

#include <stdexcept>
#include <string>

namespace sumdens {

enum class ErrorCode {
  InvalidArgument = 1,
  Domain = 2,
  Capability = 3,
  Io = 4,
};

// Single exception type for the library; the code maps onto the C API status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& msg) {
  throw Error(ErrorCode::InvalidArgument, msg);
}
[[noreturn]] inline void throw_domain(const std::string& msg) {
  throw Error(ErrorCode::Domain, msg);
}
[[noreturn]] inline void throw_capability(const std::string& msg) {
  throw Error(ErrorCode::Capability, msg);
}
[[noreturn]] inline void throw_io(const std::string& msg) {
  throw Error(ErrorCode::Io, msg);
}

}  // namespace sumdens

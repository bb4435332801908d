#pragma once

#include <stdexcept>
#include <string>

namespace sewkit {

// Numeric values are part of the C API (see sewkit.h) and must not change.
enum class ErrorCode : int {
  ok = 0,
  invalid_argument = 1,
  domain = 2,
  level_overflow = 3,
  off_grid = 4,
  unsupported = 5,
  degenerate = 6,
  budget = 7,
  io = 8,
  config = 9,
  internal = 10,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

inline void require(bool condition, ErrorCode code, const std::string& what) {
  if (!condition) fail(code, what);
}

}  // namespace sewkit

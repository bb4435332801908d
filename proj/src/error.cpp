#include "sewkit/error.hpp"

namespace sewkit {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::ok: return "ok";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::domain: return "domain";
    case ErrorCode::level_overflow: return "level_overflow";
    case ErrorCode::off_grid: return "off_grid";
    case ErrorCode::unsupported: return "unsupported";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::budget: return "budget";
    case ErrorCode::io: return "io";
    case ErrorCode::config: return "config";
    case ErrorCode::internal: return "internal";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace sewkit

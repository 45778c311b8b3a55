#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace govlab {

/// Broad failure class. The gateway maps each kind to exactly one HTTP status.
enum class ErrorKind {
  kInvalidArgument,  // 422
  kNotFound,         // 404
  kUnauthenticated,  // 401
  kForbidden,        // 403
  kConflict,         // 409: operation illegal in the current state
  kCorrupt,          // persisted data fails verification
  kIo,
};

std::string_view to_string(ErrorKind kind);
int http_status(ErrorKind kind);

/// Every module throws this. `code()` is a stable upper-case reason such as
/// "OVER_BUDGET" or "ILLEGAL_TRANSITION" that surfaces verbatim over the API.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& message)
      : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

}  // namespace govlab

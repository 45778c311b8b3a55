#include "govlab/core/error.hpp"

namespace govlab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kNotFound: return "not_found";
    case ErrorKind::kUnauthenticated: return "unauthenticated";
    case ErrorKind::kForbidden: return "forbidden";
    case ErrorKind::kConflict: return "conflict";
    case ErrorKind::kCorrupt: return "corrupt";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

int http_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return 422;
    case ErrorKind::kNotFound: return 404;
    case ErrorKind::kUnauthenticated: return 401;
    case ErrorKind::kForbidden: return 403;
    case ErrorKind::kConflict: return 409;
    case ErrorKind::kCorrupt:
    case ErrorKind::kIo: return 500;
  }
  return 500;
}

}  // namespace govlab

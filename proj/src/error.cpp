#include "edgetext/error.hpp"

namespace edgetext {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kDegenerateChord: return "degenerate chord";
    case ErrorKind::kMalformedAnnotation: return "malformed annotation";
    case ErrorKind::kInsufficientPoints: return "insufficient points";
    case ErrorKind::kSingularFit: return "singular fit";
    case ErrorKind::kIncompatibleParams: return "incompatible params";
    case ErrorKind::kShapeMismatch: return "shape mismatch";
    case ErrorKind::kInvalidArgument: return "invalid argument";
    case ErrorKind::kParse: return "parse error";
    case ErrorKind::kFormat: return "format error";
    case ErrorKind::kIo: return "io error";
  }
  return "unknown error";
}

}  // namespace edgetext

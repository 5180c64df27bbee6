#include "bmhd/common/error.hpp"

namespace bmhd {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Input: return "input";
    case ErrorKind::State: return "state";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::BlowUp: return "blow-up";
    case ErrorKind::InsufficientSignal: return "insufficient-signal";
    case ErrorKind::Window: return "window";
    case ErrorKind::PoorFit: return "poor-fit";
    case ErrorKind::Config: return "config";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(to_string(kind)) + " error: " + what);
}

}  // namespace bmhd

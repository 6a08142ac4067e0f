#include "bumpdirac/errors.hpp"

namespace bumpdirac {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::shape: return "shape";
    case ErrorKind::degenerate_profile: return "degenerate_profile";
    case ErrorKind::domain: return "domain";
    case ErrorKind::gap_parameter: return "gap_parameter";
    case ErrorKind::integration: return "integration";
    case ErrorKind::singular_parameter: return "singular_parameter";
    case ErrorKind::inconsistent_matrix: return "inconsistent_matrix";
    case ErrorKind::degenerate_solution: return "degenerate_solution";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::selection_failure: return "selection_failure";
    case ErrorKind::resolution: return "resolution";
    case ErrorKind::resolvent_parameter: return "resolvent_parameter";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message), kind_(kind) {}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

}  // namespace bumpdirac

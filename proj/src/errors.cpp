#include "diffusefield/errors.hpp"

namespace diffusefield {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::proximity: return "proximity";
    case ErrorKind::parse: return "parse";
    case ErrorKind::config: return "config";
    case ErrorKind::singular: return "singular";
    case ErrorKind::branch: return "branch";
  }
  return "unknown";
}

bool is_config_kind(ErrorKind kind) {
  return kind == ErrorKind::domain || kind == ErrorKind::parse || kind == ErrorKind::config;
}

}  // namespace diffusefield

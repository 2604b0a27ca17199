#include "cornergl/error.hpp"

namespace cornergl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::NonConvergence: return "NonConvergence";
  case ErrorKind::InvalidParams: return "InvalidParams";
  case ErrorKind::DegenerateMinimizer: return "DegenerateMinimizer";
  case ErrorKind::InvalidGeometry: return "InvalidGeometry";
  case ErrorKind::OutsideDomain: return "OutsideDomain";
  case ErrorKind::MeshFailure: return "MeshFailure";
  case ErrorKind::UnderflowRegionTooLarge: return "UnderflowRegionTooLarge";
  case ErrorKind::InsufficientRange: return "InsufficientRange";
  case ErrorKind::ConfigError: return "ConfigError";
  case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

} // namespace cornergl

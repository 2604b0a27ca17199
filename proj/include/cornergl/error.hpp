#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cornergl {

enum class ErrorKind {
  NonConvergence,
  InvalidParams,
  DegenerateMinimizer,
  InvalidGeometry,
  OutsideDomain,
  MeshFailure,
  UnderflowRegionTooLarge,
  InsufficientRange,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind and the module that raised it.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string module, const std::string& what)
      : std::runtime_error(what), kind_(kind), module_(std::move(module)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& module() const noexcept { return module_; }

private:
  ErrorKind kind_;
  std::string module_;
};

} // namespace cornergl

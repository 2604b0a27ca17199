#pragma once

#include "cornergl/config.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace cornergl {

struct RunOptions {
  std::filesystem::path out_dir = "out";
  bool write_json = true;
  bool write_csv = true;
  int verbosity = 1; ///< 0 quiet, 1 warnings, 2 info, 3 debug
};

struct RunOutcome {
  nlohmann::json report;
  std::vector<std::filesystem::path> files;
};

/// Validates, dispatches on cfg.command and writes the report files.
RunOutcome run(const RunConfig& cfg, const RunOptions& opts = {});

/// Log level from a CORNER_GL_LOG style string (quiet|warn|info|debug).
int verbosity_from_string(const std::string& s);

} // namespace cornergl

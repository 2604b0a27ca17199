#pragma once

#include "cornergl/config.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>

namespace cornergl {

inline constexpr int kSchemaVersion = 1;

nlohmann::json module_versions();

/// Wraps a command result with the schema version, config, config hash,
/// module versions and the reproducibility ledger (d_ell, gamma, h,
/// tolerances). Contains no timestamps or host data.
nlohmann::json report_envelope(const RunConfig& cfg, nlohmann::json result, nlohmann::json ledger);

/// Writes `j.dump(2)` plus a newline; throws IoError.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);
void write_text_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

/// Machine-readable error record {kind, module, message}.
nlohmann::json error_record(const std::exception& e);

} // namespace cornergl

#include "cornergl/report.hpp"

#include "cornergl/error.hpp"

#include <fstream>

namespace cornergl {

nlohmann::json module_versions() {
  return {{"effective1d", "1.0"}, {"costfn", "1.0"}, {"geometry", "1.0"},
          {"glsolver", "1.0"},    {"analysis", "1.0"}, {"cli", "1.0"}};
}

nlohmann::json report_envelope(const RunConfig& cfg, nlohmann::json result, nlohmann::json ledger) {
  return {{"schema_version", kSchemaVersion},
          {"command", to_string(cfg.command)},
          {"config_hash", config_hash(cfg)},
          {"config", to_json(cfg)},
          {"module_versions", module_versions()},
          {"ledger", std::move(ledger)},
          {"result", std::move(result)}};
}

void write_text_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorKind::IoError, "cli", "cannot open " + path.string() + " for writing");
  body(os);
  os.flush();
  if (!os) throw Error(ErrorKind::IoError, "cli", "write failed: " + path.string());
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& j) {
  write_text_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

nlohmann::json error_record(const std::exception& e) {
  if (const auto* ce = dynamic_cast<const Error*>(&e))
    return {{"kind", std::string(to_string(ce->kind()))}, {"module", ce->module()}, {"message", ce->what()}};
  return {{"kind", "Internal"}, {"module", "unknown"}, {"message", e.what()}};
}

} // namespace cornergl

#include "cornergl/config.hpp"
#include "cornergl/error.hpp"
#include "cornergl/pipeline.hpp"
#include "cornergl/report.hpp"

#include "CLI11.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

using namespace cornergl;

int main(int argc, char** argv) {
  CLI::App app{"Corner energies of the Ginzburg-Landau functional near almost flat angles"};
  app.require_subcommand(1, 1);

  std::string config_path;
  std::string out_dir = "out";
  std::string format;
  int jobs = -1;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key = value run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "output directory")->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for sweep rows (default: hardware threads)");
  app.add_option("--format", format, "write only this report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--set", overrides, "override a config key, e.g. --set b=1.3");

  app.fallthrough();
  const std::pair<const char*, const char*> commands[] = {
      {"solve1d", "minimise the one-dimensional effective energy"},
      {"cost", "build and check the cost function F0"},
      {"solve2d", "minimise the GL energy on one wedge"},
      {"trial", "energy of the explicit trial state"},
      {"sweep", "corner energies over a delta grid"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  RunOptions opts;
  opts.out_dir = out_dir;
  if (format == "json") opts.write_csv = false;
  if (format == "csv") opts.write_json = false;
  if (const char* lv = std::getenv("CORNER_GL_LOG")) opts.verbosity = verbosity_from_string(lv);

  try {
    std::ostringstream text;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      text << in.rdbuf() << '\n';
    }
    for (const auto& o : overrides) text << o << '\n';
    std::istringstream is(text.str());
    auto cfg = parse_config(is, config_path.empty() ? "<overrides>" : config_path);
    cfg.command = command_from_string(app.get_subcommands().front()->get_name());
    if (jobs >= 0) cfg.jobs = jobs;

    const auto outcome = run(cfg, opts);
    for (const auto& f : outcome.files) fmt::print("{}\n", f.string());
    return 0;
  } catch (const std::exception& e) {
    const auto rec = error_record(e);
    fmt::print(stderr, "{}\n", rec.dump());
    try {
      std::filesystem::create_directories(opts.out_dir);
      write_json_file(opts.out_dir / "error.json", rec);
    } catch (const std::exception&) {
    }
    const auto* ce = dynamic_cast<const Error*>(&e);
    return ce != nullptr && ce->kind() == ErrorKind::ConfigError ? 2 : 1;
  }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cornergl/config.hpp"
#include "cornergl/error.hpp"
#include "cornergl/pipeline.hpp"
#include "cornergl/report.hpp"
#include "frozen.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cornergl;
namespace fs = std::filesystem;

namespace {

RunConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("cornergl_test_" + name);
  fs::remove_all(p);
  return p;
}

} // namespace

TEST_CASE("config parsing") {
  const auto c = parse(R"(# sweep definition
command = "sweep"
b = 1.3
ell = 8   # trailing comment
deltas = [0.1, 0.2]
sides = ["plus"]
gamma = 0.25
diagnostics = false
seed = 42
)");
  CHECK(c.command == Command::Sweep);
  CHECK(c.b == 1.3);
  CHECK(c.ell == 8.0);
  CHECK(c.deltas == std::vector<double>{0.1, 0.2});
  REQUIRE(c.sides.size() == 1);
  CHECK(c.sides[0] == Side::Plus);
  CHECK(c.gamma.value() == 0.25);
  CHECK(!c.diagnostics);
  CHECK(c.seed == 42);
  CHECK_THROWS_AS(parse("bogus = 1"), Error);
  CHECK_THROWS_AS(parse("b = abc"), Error);
  CHECK_THROWS_AS(parse("command = solve3d"), Error);
  CHECK_THROWS_AS(parse("just words"), Error);
}

TEST_CASE("validation names the violated range") {
  auto c = parse("b = 0.5");
  try {
    validate(c);
    FAIL("expected ConfigError");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ConfigError);
    CHECK(std::string(e.what()).find("(1, 1/Theta0)") != std::string::npos);
  }
  CHECK_THROWS_AS(validate(parse("command = solve2d\nh = 2")), Error);
  CHECK_THROWS_AS(validate(parse("command = sweep\ndeltas = [0.5]")), Error);
  CHECK_NOTHROW(validate(parse("command = solve2d\nell = 6\nh = 0.5")));
}

TEST_CASE("config hash") {
  const auto a = parse("b = 1.5\njobs = 1");
  const auto b = parse("jobs = 4\nb = 1.5");
  CHECK(config_hash(a) == config_hash(b)); // jobs does not affect results
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) != config_hash(parse("b = 1.4")));
}

TEST_CASE("solve1d report") {
  const auto dir = scratch("solve1d");
  RunOptions o;
  o.out_dir = dir;
  o.verbosity = 0;
  const auto out = run(parse("command = solve1d\nb = 1.5\nell = 10"), o);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(j.at("config_hash").get<std::string>().size() == 16);
  CHECK(j.at("ledger").contains("d_ell"));
  CHECK(j.at("ledger").contains("tolerances"));
  const auto& r = j.at("result");
  CHECK(std::abs(r.at("alpha0").get<double>() - frozen::kEll10[2].alpha0) < 1e-8);
  CHECK(r.at("e1d").get<double>() == doctest::Approx(frozen::kEll10[2].e1d).epsilon(1e-6));
  CHECK(r.at("ecorr").get<double>() == doctest::Approx(frozen::kEll10[2].ecorr).epsilon(1e-5));
  // Round trip: parsing the file reproduces the in-memory report.
  CHECK(j == out.report);
  CHECK(fs::exists(dir / "profile.csv"));
}

TEST_CASE("identical configs give byte-identical reports") {
  const auto cfg = parse("command = solve2d\nb = 1.5\nell = 6\nL = 4\ndelta = 0.2\nh = 0.5\nseed = 3");
  RunOptions o;
  o.verbosity = 0;
  const auto da = scratch("det_a"), db = scratch("det_b");
  o.out_dir = da;
  run(cfg, o);
  o.out_dir = db;
  run(cfg, o);
  for (const char* f : {"report.json", "solve2d.csv"}) CHECK(slurp(da / f) == slurp(db / f));
}

TEST_CASE("sweep writes csv with one row per beta") {
  const auto dir = scratch("sweep");
  RunOptions o;
  o.out_dir = dir;
  o.verbosity = 0;
  run(parse("command = sweep\nell = 6\nL = 4\nh = 0.5\ndeltas = [0.1, 0.2]\nsides = [minus]\ndiagnostics = false"), o);
  const auto csv = slurp(dir / "sweep.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j.at("result").at("fit_minus").at("points") == 2);
  CHECK(fs::exists(dir / "sweep_plot.dat"));
}

TEST_CASE("command line front-end") {
  const char* exe = std::getenv("CORNERGL_CLI");
  if (exe == nullptr) return;
  const auto dir = scratch("cli");
  const auto ok = std::system((std::string(exe) + " solve1d --set b=1.3 --set ell=8 --format json --out " +
                               dir.string() + " > /dev/null").c_str());
  CHECK(ok == 0);
  CHECK(fs::exists(dir / "report.json"));
  CHECK(!fs::exists(dir / "profile.csv"));
  const auto bad = std::system((std::string(exe) + " solve1d --set b=0.5 --out " + dir.string() + " 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(bad) == 2);
  const auto err = nlohmann::json::parse(slurp(dir / "error.json"));
  CHECK(err.at("kind") == "ConfigError");
  CHECK(err.at("module") == "cli");
}

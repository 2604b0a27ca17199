#pragma once

// Run configuration: flat `key = value` text, one key per line, `#` starts a
// comment. Values are numbers, booleans, bare or quoted strings, or
// bracketed comma-separated lists.
//
//   command = "sweep"
//   b = 1.5
//   deltas = [0.1, 0.15, 0.2, 0.25]
//   sides = ["minus", "plus"]

#include "cornergl/geometry.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cornergl {

enum class Command { Solve1D, Cost, Solve2D, Trial, Sweep };

std::string to_string(Command c);
Command command_from_string(const std::string& s);

/// de Gennes constant; b must lie in (1, 1 / kTheta0).
inline constexpr double kTheta0 = 0.5901061249;

struct RunConfig {
  Command command = Command::Solve1D;
  double b = 1.5;
  double ell = 10.0;
  double L = 8.0;
  std::optional<double> beta;       ///< overrides (delta, side) when set
  double delta = 0.0;
  Side side = Side::Minus;
  std::optional<double> gamma;      ///< default delta^{2/3}
  std::vector<double> gammas;       ///< extra widths for the trial command
  bool log_gamma = false;
  double h = 0.1;                   ///< 2D mesh size
  double h1d = 10.0 / 2047.0;       ///< 1D grid spacing
  double d_ell = -1.0;              ///< < 0: ell^-4
  std::vector<double> deltas{0.1, 0.15, 0.2, 0.25};
  std::vector<Side> sides{Side::Minus, Side::Plus};
  double tol_factor = 1e-8;
  int max_iterations = 50000;
  int memory = 10;
  bool diagnostics = true;
  bool write_field = false;
  std::uint64_t seed = 0;
  int jobs = 0;                     ///< 0: hardware concurrency; not part of the hash
};

RunConfig parse_config(std::istream& is, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

/// Throws ConfigError naming the violated range.
void validate(const RunConfig& cfg);

/// Sorted key = value listing of everything that affects results.
std::string canonical_form(const RunConfig& cfg);
/// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);

} // namespace cornergl

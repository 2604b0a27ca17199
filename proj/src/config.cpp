#include "cornergl/config.hpp"

#include "cornergl/error.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/lexical_cast.hpp>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace cornergl {

std::string to_string(Command c) {
  switch (c) {
  case Command::Solve1D: return "solve1d";
  case Command::Cost: return "cost";
  case Command::Solve2D: return "solve2d";
  case Command::Trial: return "trial";
  case Command::Sweep: return "sweep";
  }
  return "?";
}

Command command_from_string(const std::string& s) {
  for (Command c : {Command::Solve1D, Command::Cost, Command::Solve2D, Command::Trial, Command::Sweep})
    if (to_string(c) == s) return c;
  throw Error(ErrorKind::ConfigError, "cli", "unknown command '" + s + "' (solve1d|cost|solve2d|trial|sweep)");
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, "cli", msg); }

std::string unquote(std::string v) {
  boost::trim(v);
  if (v.size() >= 2 && (v.front() == '"' || v.front() == '\'') && v.back() == v.front())
    return v.substr(1, v.size() - 2);
  return v;
}

std::vector<std::string> list_items(const std::string& key, std::string v) {
  boost::trim(v);
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') fail(key + ": expected a [list]");
  v = v.substr(1, v.size() - 2);
  std::vector<std::string> items;
  if (boost::trim_copy(v).empty()) return items;
  boost::split(items, v, boost::is_any_of(","));
  for (auto& it : items) it = unquote(it);
  return items;
}

double as_double(const std::string& key, const std::string& v) {
  try {
    return boost::lexical_cast<double>(unquote(v));
  } catch (const boost::bad_lexical_cast&) {
    fail(key + ": not a number: " + v);
  }
}

long long as_int(const std::string& key, const std::string& v) {
  try {
    return boost::lexical_cast<long long>(unquote(v));
  } catch (const boost::bad_lexical_cast&) {
    fail(key + ": not an integer: " + v);
  }
}

bool as_bool(const std::string& key, const std::string& v) {
  const auto s = unquote(v);
  if (s == "true") return true;
  if (s == "false") return false;
  fail(key + ": expected true or false");
}

Side as_side(const std::string& key, const std::string& v) {
  try {
    return side_from_string(unquote(v));
  } catch (const std::exception&) {
    fail(key + ": side must be minus or plus");
  }
}

void assign(RunConfig& c, const std::string& key, const std::string& v) {
  if (key == "command") c.command = command_from_string(unquote(v));
  else if (key == "b") c.b = as_double(key, v);
  else if (key == "ell") c.ell = as_double(key, v);
  else if (key == "L") c.L = as_double(key, v);
  else if (key == "beta") c.beta = as_double(key, v);
  else if (key == "delta") c.delta = as_double(key, v);
  else if (key == "side") c.side = as_side(key, v);
  else if (key == "gamma") c.gamma = as_double(key, v);
  else if (key == "gammas") {
    c.gammas.clear();
    for (const auto& it : list_items(key, v)) c.gammas.push_back(as_double(key, it));
  } else if (key == "log_gamma") c.log_gamma = as_bool(key, v);
  else if (key == "h") c.h = as_double(key, v);
  else if (key == "h1d") c.h1d = as_double(key, v);
  else if (key == "d_ell") c.d_ell = as_double(key, v);
  else if (key == "deltas") {
    c.deltas.clear();
    for (const auto& it : list_items(key, v)) c.deltas.push_back(as_double(key, it));
  } else if (key == "sides") {
    c.sides.clear();
    for (const auto& it : list_items(key, v)) c.sides.push_back(as_side(key, it));
  } else if (key == "tol_factor") c.tol_factor = as_double(key, v);
  else if (key == "max_iterations") c.max_iterations = static_cast<int>(as_int(key, v));
  else if (key == "memory") c.memory = static_cast<int>(as_int(key, v));
  else if (key == "diagnostics") c.diagnostics = as_bool(key, v);
  else if (key == "write_field") c.write_field = as_bool(key, v);
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(as_int(key, v));
  else if (key == "jobs") c.jobs = static_cast<int>(as_int(key, v));
  else fail("unknown key '" + key + "'");
}

} // namespace

RunConfig parse_config(std::istream& is, const std::string& source) {
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    // Strip comments outside quotes.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    boost::trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(fmt::format("{}:{}: expected key = value", source, lineno));
    const auto key = boost::trim_copy(line.substr(0, eq));
    try {
      assign(cfg, key, line.substr(eq + 1));
    } catch (const Error& e) {
      fail(fmt::format("{}:{}: {}", source, lineno, e.what()));
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cli", "cannot read config file " + path);
  return parse_config(in, path);
}

void validate(const RunConfig& c) {
  const double bmax = 1.0 / kTheta0;
  if (!(c.b > 1.0 && c.b < bmax))
    fail(fmt::format("b = {} outside the surface superconductivity range (1, 1/Theta0) = (1, {:.6f})", c.b, bmax));
  if (!(c.ell > 0.0 && c.ell <= 64.0)) fail(fmt::format("ell = {} outside (0, 64]", c.ell));
  if (!(c.h1d > 0.0) || c.ell / c.h1d < 63.0) fail("h1d must be positive with at least 64 grid nodes on [0, ell]");
  if (c.d_ell > 1.0) fail("d_ell must be at most 1");
  if (!(c.tol_factor > 0.0)) fail("tol_factor must be positive");
  if (c.max_iterations < 1) fail("max_iterations must be at least 1");
  if (c.memory < 1) fail("memory must be at least 1");
  if (c.jobs < 0) fail("jobs must be nonnegative");

  const bool two_d = c.command == Command::Solve2D || c.command == Command::Trial || c.command == Command::Sweep;
  if (!two_d) return;
  if (!(c.L > 0.0)) fail("L must be positive");
  if (!(c.h > 0.0 && c.h <= c.ell / 8.0)) fail(fmt::format("h = {} outside (0, ell/8]", c.h));
  if (c.beta && !(*c.beta > 0.0 && *c.beta < 2.0 * M_PI)) fail("beta outside (0, 2 pi)");
  if (!(c.delta >= 0.0 && c.delta < M_PI)) fail("delta outside [0, pi)");
  if (c.gamma && !(*c.gamma >= 0.0)) fail("gamma must be nonnegative");
  for (double g : c.gammas)
    if (!(g >= 0.0)) fail("gammas must be nonnegative");
  if (c.command == Command::Sweep) {
    if (c.deltas.empty()) fail("deltas must not be empty");
    for (double d : c.deltas)
      if (!(d >= 0.0 && d <= 0.4)) fail(fmt::format("sweep delta = {} outside [0, 0.4]", d));
    if (c.sides.empty()) fail("sides must not be empty");
  }
}

std::string canonical_form(const RunConfig& c) {
  std::map<std::string, std::string> kv;
  auto num = [](double x) { return fmt::format("{:.17g}", x); };
  auto nums = [&](const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s + "]";
  };
  kv["command"] = to_string(c.command);
  kv["b"] = num(c.b);
  kv["ell"] = num(c.ell);
  kv["L"] = num(c.L);
  kv["beta"] = c.beta ? num(*c.beta) : "none";
  kv["delta"] = num(c.delta);
  kv["side"] = to_string(c.side);
  kv["gamma"] = c.gamma ? num(*c.gamma) : "none";
  kv["gammas"] = nums(c.gammas);
  kv["log_gamma"] = c.log_gamma ? "true" : "false";
  kv["h"] = num(c.h);
  kv["h1d"] = num(c.h1d);
  kv["d_ell"] = num(c.d_ell);
  kv["deltas"] = nums(c.deltas);
  std::string sides = "[";
  for (std::size_t i = 0; i < c.sides.size(); ++i) sides += (i ? "," : "") + to_string(c.sides[i]);
  kv["sides"] = sides + "]";
  kv["tol_factor"] = num(c.tol_factor);
  kv["max_iterations"] = std::to_string(c.max_iterations);
  kv["memory"] = std::to_string(c.memory);
  kv["diagnostics"] = c.diagnostics ? "true" : "false";
  kv["write_field"] = c.write_field ? "true" : "false";
  kv["seed"] = std::to_string(c.seed);
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical_form(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j = {{"command", to_string(c.command)},
                      {"b", c.b},
                      {"ell", c.ell},
                      {"L", c.L},
                      {"delta", c.delta},
                      {"side", to_string(c.side)},
                      {"gammas", c.gammas},
                      {"log_gamma", c.log_gamma},
                      {"h", c.h},
                      {"h1d", c.h1d},
                      {"d_ell", c.d_ell},
                      {"deltas", c.deltas},
                      {"tol_factor", c.tol_factor},
                      {"max_iterations", c.max_iterations},
                      {"memory", c.memory},
                      {"diagnostics", c.diagnostics},
                      {"write_field", c.write_field},
                      {"seed", c.seed}};
  j["beta"] = c.beta ? nlohmann::json(*c.beta) : nlohmann::json(nullptr);
  j["gamma"] = c.gamma ? nlohmann::json(*c.gamma) : nlohmann::json(nullptr);
  nlohmann::json sides = nlohmann::json::array();
  for (Side s : c.sides) sides.push_back(to_string(s));
  j["sides"] = sides;
  return j;
}

} // namespace cornergl

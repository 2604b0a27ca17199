#include "cornergl/pipeline.hpp"

#include "cornergl/analysis.hpp"
#include "cornergl/costfn.hpp"
#include "cornergl/effective1d.hpp"
#include "cornergl/error.hpp"
#include "cornergl/glsolver.hpp"
#include "cornergl/mesh.hpp"
#include "cornergl/report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <ostream>
#include <thread>

namespace cornergl {

int verbosity_from_string(const std::string& s) {
  if (s == "quiet" || s == "off" || s == "0") return 0;
  if (s == "warn" || s == "1") return 1;
  if (s == "info" || s == "2") return 2;
  if (s == "debug" || s == "3") return 3;
  return 1;
}

namespace {

class Log {
public:
  explicit Log(int level) : level_(level) {}
  template <typename... Args>
  void operator()(int lvl, fmt::format_string<Args...> f, Args&&... args) const {
    if (lvl <= level_) fmt::print(stderr, "[cornergl] {}\n", fmt::format(f, std::forward<Args>(args)...));
  }

private:
  int level_;
};

struct Context {
  const RunConfig& cfg;
  const RunOptions& opts;
  Log log;
  RunOutcome out;

  std::filesystem::path file(const std::string& name) {
    auto p = opts.out_dir / name;
    out.files.push_back(p);
    return p;
  }
};

nlohmann::json tolerances(const RunConfig& c) {
  const SolverOptions1D o1;
  return {{"gl_tol_factor", c.tol_factor},   {"gl_max_iterations", c.max_iterations},
          {"gl_memory", c.memory},           {"newton_tol_1d", o1.newton_tol},
          {"alpha_tol_1d", o1.alpha_tol},    {"alpha_scan_step_1d", o1.alpha_scan_step}};
}

nlohmann::json base_ledger(const RunConfig& c) {
  return {{"h1d", c.h1d},
          {"d_ell", c.d_ell < 0.0 ? std::pow(c.ell, -4.0) : c.d_ell},
          {"seed", c.seed},
          {"tolerances", tolerances(c)}};
}

Effective1DSolution solve_1d(Context& ctx) {
  const auto& c = ctx.cfg;
  ctx.log(2, "1D minimisation b={} ell={} h1d={}", c.b, c.ell, c.h1d);
  auto sol = minimize_1d(c.ell, c.b, Grid1D::with_spacing(c.ell, c.h1d));
  for (const auto& w : sol.warnings) ctx.log(1, "effective1d: {}", w);
  return sol;
}

Effective1DSolution nontrivial_1d(Context& ctx) {
  auto sol = solve_1d(ctx);
  if (sol.degenerate)
    throw Error(ErrorKind::DegenerateMinimizer, "effective1d", "1D minimiser is trivial for this (b, ell)");
  return sol;
}

WedgeGeometry wedge(const RunConfig& c, double* gamma_out) {
  const auto g0 = c.beta ? build_wedge(*c.beta, c.L, c.ell) : build_wedge(c.delta, c.side, c.L, c.ell);
  const double gamma = c.gamma ? *c.gamma : default_gamma(g0.delta, g0.beta, c.log_gamma);
  *gamma_out = gamma;
  return build_wedge(g0.beta, c.L, c.ell, gamma);
}

GLOptions gl_options(const RunConfig& c, double gamma) {
  GLOptions o;
  o.tol_factor = c.tol_factor;
  o.max_iterations = c.max_iterations;
  o.memory = c.memory;
  o.gamma = gamma;
  o.seed = c.seed;
  return o;
}

double expected_corner(const WedgeGeometry& g, double ecorr) { return -g.signed_deficit() * ecorr; }

nlohmann::json cmd_solve1d(Context& ctx, nlohmann::json& ledger) {
  const auto sol = solve_1d(ctx);
  (void)ledger;
  if (ctx.opts.write_csv) write_text_file(ctx.file("profile.csv"), [&](std::ostream& os) { write_profile_csv(os, sol); });
  return to_json(sol, false);
}

nlohmann::json cmd_cost(Context& ctx, nlohmann::json& ledger) {
  const auto sol = nontrivial_1d(ctx);
  const auto data = build_cost_function(sol, ctx.cfg.d_ell);
  ledger["d_ell"] = data.d_ell;
  const auto pos = verify_positivity(data);
  const auto bound = verify_F0_bound(data);
  auto j = cost_report_json(data, pos, bound);
  nlohmann::json sens = nlohmann::json::array();
  for (const auto& r : d_ell_sensitivity(sol)) sens.push_back({{"d_ell", r.d_ell}, {"min_K0", r.min_K0}, {"pass", r.pass}});
  j["d_ell_sensitivity"] = sens;
  j["alpha0"] = sol.alpha0;
  j["e1d"] = sol.e1d;
  if (ctx.opts.write_csv) write_text_file(ctx.file("cost.csv"), [&](std::ostream& os) { write_cost_csv(os, data); });
  return j;
}

nlohmann::json cmd_solve2d(Context& ctx, nlohmann::json& ledger) {
  const auto& c = ctx.cfg;
  const auto sol = nontrivial_1d(ctx);
  double gamma = 0.0;
  const auto g = wedge(c, &gamma);
  ledger["gamma"] = gamma;
  ledger["h"] = c.h;
  const auto mesh = generate_mesh(g, c.h);
  ctx.log(2, "mesh: {} nodes, {} triangles", mesh.size(), mesh.triangles.size());
  auto go = gl_options(c, gamma);
  if (g.delta > 0.0) go.expected_corner = expected_corner(g, sol.ecorr);
  const auto res = minimize_gl(g, mesh, sol, c.b, go);
  for (const auto& w : res.result.warnings) ctx.log(1, "glsolver: {}", w);
  ctx.log(2, "e_corner = {:.10g} after {} iterations", res.result.e_corner, res.result.iterations);

  nlohmann::json j = {{"geometry", to_json(g)},
                      {"alpha0", sol.alpha0},
                      {"e1d", sol.e1d},
                      {"ecorr", sol.ecorr},
                      {"corner", to_json(res.result)},
                      {"conjectured_corner", expected_corner(g, sol.ecorr)}};
  const double et = trial_energy(TrialState(g, sol, gamma), mesh, c.b);
  j["e_trial"] = et;
  j["e_trial_corner"] = et - 2.0 * c.L * sol.e1d;
  if (c.diagnostics) {
    try {
      j["splitting"] = to_json(splitting_diagnostic(res.field, g, sol, c.b));
    } catch (const Error& e) {
      j["splitting"] = error_record(e);
    }
    try {
      j["agmon"] = to_json(agmon_fit(res.field, g, sol));
    } catch (const Error& e) {
      j["agmon"] = error_record(e);
    }
  }
  if (ctx.opts.write_csv) {
    write_text_file(ctx.file("solve2d.csv"), [&](std::ostream& os) {
      const auto& r = res.result;
      os << "beta,delta,b,L,ell,h,gamma,e_gamma,e_corner,e_initial,grad_norm,iterations,converged\n";
      os << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n",
                        r.beta, r.delta, r.b, r.L, r.ell, r.h, r.gamma, r.e_gamma, r.e_corner, r.e_initial,
                        r.grad_norm, r.iterations, r.converged ? 1 : 0);
    });
  }
  if (c.write_field) {
    write_text_file(ctx.file("field.txt"), [&](std::ostream& os) { write_field(os, res.field); });
    write_text_file(ctx.file("mesh.txt"), [&](std::ostream& os) { write_mesh_text(os, mesh); });
    std::vector<double> mod(mesh.size());
    for (int i = 0; i < mesh.size(); ++i) mod[i] = std::abs(res.field.values[i]);
    write_text_file(ctx.file("field.vtk"), [&](std::ostream& os) { write_mesh_vtk(os, mesh, &mod, "abs_psi"); });
  }
  return j;
}

nlohmann::json cmd_trial(Context& ctx, nlohmann::json& ledger) {
  const auto& c = ctx.cfg;
  const auto sol = nontrivial_1d(ctx);
  double gamma = 0.0;
  const auto g = wedge(c, &gamma);
  ledger["gamma"] = gamma;
  ledger["h"] = c.h;
  const auto mesh = generate_mesh(g, c.h);
  std::vector<double> gammas{gamma};
  gammas.insert(gammas.end(), c.gammas.begin(), c.gammas.end());
  nlohmann::json rows = nlohmann::json::array();
  for (double gm : gammas) {
    const double e = trial_energy(TrialState(g, sol, gm), mesh, c.b);
    rows.push_back({{"gamma", gm}, {"e_trial", e}, {"e_trial_corner", e - 2.0 * c.L * sol.e1d}});
  }
  if (ctx.opts.write_csv) {
    write_text_file(ctx.file("trial.csv"), [&](std::ostream& os) {
      os << "gamma,e_trial,e_trial_corner\n";
      for (const auto& r : rows)
        os << fmt::format("{:.17g},{:.17g},{:.17g}\n", r["gamma"].get<double>(), r["e_trial"].get<double>(),
                          r["e_trial_corner"].get<double>());
    });
  }
  return {{"geometry", to_json(g)},
          {"e1d", sol.e1d},
          {"ecorr", sol.ecorr},
          {"conjectured_corner", expected_corner(g, sol.ecorr)},
          {"rows", rows}};
}

nlohmann::json cmd_sweep(Context& ctx, nlohmann::json& ledger, int jobs) {
  const auto& c = ctx.cfg;
  SweepOptions so;
  so.jobs = jobs;
  so.gl = gl_options(c, c.gamma ? *c.gamma : -1.0);
  so.log_gamma = c.log_gamma;
  so.diagnostics = c.diagnostics;
  so.h1d = c.h1d;
  ledger["h"] = c.h;
  ledger["gamma"] = c.gamma ? fmt::format("{:.17g}", *c.gamma) : (c.log_gamma ? "delta^(2/3) log(delta)^2" : "delta^(2/3)");
  ctx.log(2, "sweep over {} deltas on {} sides with {} workers", c.deltas.size(), c.sides.size(), jobs);
  const auto rep = conjecture_sweep(c.b, c.deltas, c.sides, c.L, c.ell, c.h, so);
  for (const auto& w : rep.warnings) ctx.log(1, "sweep: {}", w);
  if (ctx.opts.write_csv) {
    write_text_file(ctx.file("sweep.csv"), [&](std::ostream& os) { write_sweep_csv(os, rep); });
    write_text_file(ctx.file("sweep_plot.dat"), [&](std::ostream& os) {
      os << "# pi-beta e_corner\n";
      for (const auto& r : rep.rows)
        if (r.error.empty()) os << fmt::format("{:.17g} {:.17g}\n", M_PI - r.beta, r.e_corner);
    });
  }
  return to_json(rep);
}

} // namespace

RunOutcome run(const RunConfig& cfg, const RunOptions& opts) {
  validate(cfg);
  Context ctx{cfg, opts, Log(opts.verbosity), {}};
  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cli", "cannot create output directory " + opts.out_dir.string());

  int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(jobs, 1);

  auto ledger = base_ledger(cfg);
  nlohmann::json result;
  switch (cfg.command) {
  case Command::Solve1D: result = cmd_solve1d(ctx, ledger); break;
  case Command::Cost: result = cmd_cost(ctx, ledger); break;
  case Command::Solve2D: result = cmd_solve2d(ctx, ledger); break;
  case Command::Trial: result = cmd_trial(ctx, ledger); break;
  case Command::Sweep: result = cmd_sweep(ctx, ledger, jobs); break;
  }
  ctx.out.report = report_envelope(cfg, std::move(result), std::move(ledger));
  if (opts.write_json) write_json_file(ctx.file("report.json"), ctx.out.report);
  return std::move(ctx.out);
}

} // namespace cornergl

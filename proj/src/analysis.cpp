#include "cornergl/analysis.hpp"

#include "cornergl/costfn.hpp"
#include "cornergl/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <ostream>
#include <thread>

namespace cornergl {

// ---------------------------------------------------------------------------
// Trial state

TrialState::TrialState(const WedgeGeometry& g, const Effective1DSolution& sol, double gamma)
    : geom_(g), sol_(sol), gamma_(gamma) {
  if (!(gamma >= 0.0) || gamma >= 0.5 * g.beta)
    throw Error(ErrorKind::InvalidGeometry, "analysis", "transition width must satisfy 0 <= gamma < beta / 2");
  const double ds = g.signed_deficit();
  amp_lin_ = sol.alpha0 * std::sin(0.5 * (ds + gamma));
  amp_quad_ = 0.25 * std::sin(ds + gamma);
  geom_.gamma = gamma;
  geom_.theta_lt = 0.5 * (g.beta - gamma);
  geom_.theta_gt = 0.5 * (g.beta + gamma);
}

double TrialState::patch_phase(PatchCoords c) const { return -sol_.alpha0 * c.s - 0.5 * c.s * c.t; }

double TrialState::phase(const MappedPoint& m) const {
  const double th = m.polar.theta;
  if (gamma_ > 0.0 && th > geom_.theta_lt && th < geom_.theta_gt) {
    const double rho = m.polar.rho;
    return (amp_lin_ * rho + amp_quad_ * rho * rho) * (2.0 * th - geom_.theta_lt - geom_.theta_gt) / gamma_;
  }
  return patch_phase(m.patch);
}

cplx TrialState::value(const MappedPoint& m) const { return std::polar(sol_.f0(m.patch.t), phase(m)); }

cplx TrialState::value(Vec2 p) const { return value(map_coordinates(geom_, p)); }

std::vector<cplx> TrialState::on_mesh(const Mesh& mesh) const {
  std::vector<cplx> psi(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) {
    if (mesh.dirichlet[i]) {
      psi[i] = boundary_data(sol_, mesh.coords[i]);
    } else {
      psi[i] = value(MappedPoint{mesh.coords[i], to_polar(mesh.nodes[i])});
    }
  }
  return psi;
}

double default_gamma(double delta, double beta, bool log_variant) {
  if (delta <= 0.0) return 0.0;
  double g = std::pow(delta, 2.0 / 3.0);
  if (log_variant) g *= std::pow(std::log(delta), 2);
  return std::min(g, 0.45 * beta);
}

TrialState trial_state(const WedgeGeometry& g, const Effective1DSolution& sol, double gamma) {
  return TrialState(g, sol, gamma);
}

double trial_energy(const TrialState& trial, const Mesh& mesh, double b) {
  return GLDiscretisation(mesh, b).energy(trial.on_mesh(mesh)).total();
}

// ---------------------------------------------------------------------------
// Energy splitting

namespace {

struct LocalU {
  PatchCoords c;
  double f = 0.0;
  double fp = 0.0;
  cplx u;
};

LocalU reduce(const WedgeGeometry& g, const Effective1DSolution& sol, Vec2 x, cplx psi, Patch patch) {
  LocalU r;
  r.c = polar_to_patch(g, to_polar(x), patch);
  const auto smp = sol.f0.sample(r.c.t);
  r.f = smp.value;
  r.fp = smp.slope;
  const double phi = -sol.alpha0 * r.c.s - 0.5 * r.c.s * r.c.t;
  r.u = r.f > 0.0 ? psi * std::polar(1.0 / r.f, -phi) : cplx(0.0);
  return r;
}

} // namespace

SplittingReport splitting_diagnostic(const ComplexField& field, const WedgeGeometry& g,
                                     const Effective1DSolution& sol, double b) {
  const Mesh& mesh = *field.mesh;
  const auto& psi = field.values;
  const double floor = 1e-12 * sol.f0_at_0;
  const double a0 = sol.alpha0;
  SplittingReport rep;

  int masked = 0;
  for (int i = 0; i < mesh.size(); ++i)
    if (sol.f0(mesh.coords[i].t) < floor) ++masked;
  rep.masked_fraction = static_cast<double>(masked) / mesh.size();
  if (rep.masked_fraction > 0.2)
    throw Error(ErrorKind::UnderflowRegionTooLarge, "analysis", "more than 20% of nodes below the f0 floor");

  rep.e_discrete = GLDiscretisation(mesh, b).energy(psi).total();
  const double hrow = g.ell / mesh.nt;
  std::map<int, std::pair<double, int>> js_rows;

  for (int k = 0; k < static_cast<int>(mesh.triangles.size()); ++k) {
    const auto& tri = mesh.triangles[k];
    const Vec2 P[3] = {mesh.nodes[tri[0]], mesh.nodes[tri[1]], mesh.nodes[tri[2]]};
    const Vec2 cen = (1.0 / 3.0) * (P[0] + P[1] + P[2]);
    const Patch patch = map_coordinates(g, cen).patch.patch;
    LocalU n[3];
    bool skip = false;
    for (int c = 0; c < 3; ++c) {
      n[c] = reduce(g, sol, P[c], psi[tri[c]], patch);
      if (n[c].f < floor) skip = true;
    }
    if (skip) continue;
    // Gradient of the linear interpolant of u in patch coordinates.
    const double ds1 = n[1].c.s - n[0].c.s, dt1 = n[1].c.t - n[0].c.t;
    const double ds2 = n[2].c.s - n[0].c.s, dt2 = n[2].c.t - n[0].c.t;
    const double det = ds1 * dt2 - ds2 * dt1;
    const cplx du1 = n[1].u - n[0].u, du2 = n[2].u - n[0].u;
    const cplx us = (du1 * dt2 - du2 * dt1) / det;
    const cplx ut = (ds1 * du2 - ds2 * du1) / det;
    const double area = 0.5 * std::abs(det);

    double jsum = 0.0;
    for (int e = 0; e < 3; ++e) {
      const LocalU& A = n[e];
      const LocalU& B = n[(e + 1) % 3];
      const double t = 0.5 * (A.c.t + B.c.t);
      const cplx u = 0.5 * (A.u + B.u);
      const auto smp = sol.f0.sample(t);
      const double f = smp.value, fp = smp.slope, f2 = f * f;
      const double tw = t + a0;
      const double u2 = std::norm(u);
      const double js = (std::conj(u) * us).imag();
      const double w = area / 3.0;

      const cplx as = f * us - cplx(0.0, tw * f) * u;
      const cplx at = fp * u + f * ut;
      const double kin = std::norm(as) + std::norm(at);
      rep.e_gl += w * (kin - f2 * u2 / b + f2 * f2 * u2 * u2 / (2.0 * b));
      rep.f0_quartic_term -= w * f2 * f2 / (2.0 * b);
      rep.e0_gradient += w * f2 * (std::norm(us) + std::norm(ut));
      rep.e0_current -= w * 2.0 * tw * f2 * js;
      rep.e0_quartic += w * f2 * f2 * (1.0 - u2) * (1.0 - u2) / (2.0 * b);
      jsum += js;
    }
    if (patch == Patch::Plus) {
      const int row = static_cast<int>(std::floor(map_coordinates(g, cen).patch.t / hrow));
      auto& acc = js_rows[row];
      acc.first += jsum / 3.0;
      acc.second += 1;
    }
  }
  rep.e0_u = rep.e0_gradient + rep.e0_current + rep.e0_quartic;

  // Bisectrix flux of f0 f0' |u|^2; both patches see n . grad t = sin(ds/2).
  const double nt_dot = std::sin(0.5 * g.signed_deficit());
  for (const auto& e : mesh.edges) {
    if (e.tag != EdgeTag::Bisectrix) continue;
    const Vec2 pa = mesh.nodes[e.a], pb = mesh.nodes[e.b];
    const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
    for (Patch patch : {Patch::Plus, Patch::Minus}) {
      const LocalU A = reduce(g, sol, pa, psi[e.a], patch);
      const LocalU B = reduce(g, sol, pb, psi[e.b], patch);
      if (patch == Patch::Minus) {
        const LocalU Ap = reduce(g, sol, pa, psi[e.a], Patch::Plus);
        rep.bisectrix_modulus_mismatch =
            std::max(rep.bisectrix_modulus_mismatch, std::abs(std::abs(A.u) - std::abs(Ap.u)));
      }
      // Simpson along the edge.
      const Vec2 pm = 0.5 * (pa + pb);
      const LocalU M = reduce(g, sol, pm, 0.0, patch);
      const double um2 = std::norm(0.5 * (A.u + B.u));
      const double va = A.f * A.fp * std::norm(A.u), vb = B.f * B.fp * std::norm(B.u);
      const double vm = M.f * M.fp * um2;
      rep.bisectrix_term += nt_dot * len * (va + 4.0 * vm + vb) / 6.0;
    }
  }

  const double scale = std::abs(rep.e_gl);
  rep.identity_residual = std::abs(rep.e_gl - (rep.f0_quartic_term + rep.e0_u)) / scale;
  rep.identity_residual_with_bis =
      std::abs(rep.e_gl - (rep.f0_quartic_term + rep.e0_u + rep.bisectrix_term)) / scale;

  const auto& f0 = sol.f0;
  std::vector<double> lb(f0.grid.size());
  for (int i = 0; i < f0.grid.size(); ++i) {
    const double t = f0.grid.node(i);
    lb[i] = t * (t + a0) * (t + 2.0 * a0) * f0.values[i] * f0.values[i];
  }
  const auto wts = f0.grid.weights();
  double lbi = 0.0;
  for (std::size_t i = 0; i < lb.size(); ++i) lbi += wts[i] * lb[i];
  rep.e0_lower_bound = g.signed_deficit() * lbi;

  for (const auto& [row, acc] : js_rows) rep.js_profile.emplace_back((row + 0.5) * hrow, acc.first / acc.second);
  return rep;
}

// ---------------------------------------------------------------------------
// Agmon decay

namespace {

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a, w = p - a;
  const double len2 = d.x * d.x + d.y * d.y;
  const double s = std::clamp((w.x * d.x + w.y * d.y) / len2, 0.0, 1.0);
  const Vec2 q = a + s * d;
  return std::hypot(p.x - q.x, p.y - q.y);
}

} // namespace

DecayFit agmon_fit(const ComplexField& field, const WedgeGeometry& g, const Effective1DSolution& sol) {
  const Mesh& mesh = *field.mesh;
  const auto cost = build_cost_function(sol);
  DecayFit fit;
  fit.t_lo = sol.t_max + 1.0;
  fit.t_hi = cost.ell_bar;
  const double floor = 1e-12 * sol.f0_at_0;

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (int i = 0; i < mesh.size(); ++i) {
    const Vec2 p = mesh.nodes[i];
    const double d = std::min(segment_distance(p, g.V, g.B), segment_distance(p, g.V, g.A));
    const double m = std::abs(field.values[i]);
    fit.max_all = std::max(fit.max_all, m);
    if (d >= 5.0) fit.max_far = std::max(fit.max_far, m);
    const double t = mesh.coords[i].t;
    if (t < fit.t_lo || t > fit.t_hi || sol.f0(t) < floor || m <= 0.0) continue;
    const double y = std::log(m);
    pts.emplace_back(d, y);
    sx += d;
    sy += y;
    sxx += d * d;
    sxy += d * y;
  }
  fit.samples = static_cast<int>(pts.size());
  const double n = fit.samples;
  const double var = sxx - sx * sx / std::max(n, 1.0);
  if (fit.samples < 8 || fit.t_hi - fit.t_lo < 0.5 || !(var > 1e-12 * std::max(n, 1.0)))
    throw Error(ErrorKind::InsufficientRange, "analysis", "not enough decay range for the Agmon fit");
  const double slope = (sxy - sx * sy / n) / var;
  const double icpt = (sy - slope * sx) / n;
  fit.rate = -slope;
  fit.prefactor = std::exp(icpt);
  double ss = 0.0;
  for (const auto& [d, y] : pts) ss += std::pow(y - (icpt + slope * d), 2);
  fit.residual = std::sqrt(ss / n);
  return fit;
}

// ---------------------------------------------------------------------------
// Sweep

SweepFit fit_through_origin(const std::vector<SweepRow>& rows, Side side, double ecorr, bool referenced) {
  SweepFit f;
  f.reference = side == Side::Minus ? -ecorr : ecorr;
  double sxy = 0.0, sxx = 0.0;
  for (const auto& r : rows) {
    if (r.side != side || r.delta <= 0.0 || !r.error.empty()) continue;
    sxy += r.delta * (referenced ? r.e_corner_ref : r.e_corner);
    sxx += r.delta * r.delta;
    ++f.points;
  }
  if (f.points == 0) return f;
  f.slope = sxy / sxx;
  f.rel_error = std::abs(f.slope - f.reference) / std::abs(f.reference);
  return f;
}

SweepReport conjecture_sweep(double b, const std::vector<double>& deltas, const std::vector<Side>& sides,
                             double L, double ell, double h, const SweepOptions& opts) {
  for (double d : deltas)
    if (!(d >= 0.0 && d <= 0.4))
      throw Error(ErrorKind::InvalidParams, "analysis", "sweep deltas must lie in [0, 0.4]");

  SweepReport rep;
  rep.b = b;
  rep.L = L;
  rep.ell = ell;
  rep.h = h;
  const auto sol = minimize_1d(ell, b, Grid1D::with_spacing(ell, opts.h1d));
  if (sol.degenerate)
    throw Error(ErrorKind::DegenerateMinimizer, "analysis", "1D minimiser is trivial for this b");
  rep.e1d = sol.e1d;
  rep.ecorr = sol.ecorr;

  struct Job {
    double delta;
    Side side;
  };
  std::vector<Job> jobs{{0.0, Side::Minus}};
  for (Side s : sides)
    for (double d : deltas)
      if (d > 0.0) jobs.push_back({d, s});
  rep.rows.resize(jobs.size());

  auto run = [&](std::size_t k) {
    SweepRow& row = rep.rows[k];
    row.delta = jobs[k].delta;
    row.side = jobs[k].side;
    try {
      const double gamma = opts.gl.gamma >= 0.0 ? opts.gl.gamma
                                                : default_gamma(row.delta, M_PI, opts.log_gamma);
      const auto g = build_wedge(row.delta, row.side, L, ell, gamma);
      row.beta = g.beta;
      row.gamma = gamma;
      const auto mesh = generate_mesh(g, h);
      GLOptions go = opts.gl;
      go.gamma = gamma;
      if (row.delta > 0.0) go.expected_corner = (row.side == Side::Minus ? -1.0 : 1.0) * row.delta * sol.ecorr;
      const auto res = minimize_gl(g, mesh, sol, b, go);
      row.e_gamma = res.result.e_gamma;
      row.e_corner = res.result.e_corner;
      row.grad_norm = res.result.grad_norm;
      row.iterations = res.result.iterations;
      row.converged = res.result.converged;
      row.e_trial = trial_energy(TrialState(g, sol, gamma), mesh, b);
      row.e_trial_corner = row.e_trial - 2.0 * L * sol.e1d;
      if (opts.diagnostics) {
        const auto sp = splitting_diagnostic(res.field, g, sol, b);
        row.splitting_residual = sp.identity_residual;
        row.splitting_residual_with_bis = sp.identity_residual_with_bis;
        const auto af = agmon_fit(res.field, g, sol);
        row.agmon_rate = af.rate;
        row.agmon_far_ratio = af.max_far / af.max_all;
      }
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };

  const int workers = std::clamp(opts.jobs, 1, static_cast<int>(jobs.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) run(k);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::stable_sort(rep.rows.begin(), rep.rows.end(),
                   [](const SweepRow& a, const SweepRow& b) { return a.beta < b.beta; });
  for (const auto& r : rep.rows) {
    if (r.delta == 0.0 && r.error.empty()) {
      rep.strip_offset = r.e_corner;
      rep.strip_trial_offset = r.e_trial_corner;
    }
  }
  for (auto& r : rep.rows) {
    r.e_corner_ref = r.e_corner - rep.strip_offset;
    r.e_trial_corner_ref = r.e_trial_corner - rep.strip_trial_offset;
  }
  rep.fit_minus = fit_through_origin(rep.rows, Side::Minus, sol.ecorr);
  rep.fit_plus = fit_through_origin(rep.rows, Side::Plus, sol.ecorr);
  rep.fit_minus_ref = fit_through_origin(rep.rows, Side::Minus, sol.ecorr, true);
  rep.fit_plus_ref = fit_through_origin(rep.rows, Side::Plus, sol.ecorr, true);
  for (const auto& r : rep.rows) {
    if (!r.error.empty()) rep.warnings.push_back("row beta=" + std::to_string(r.beta) + ": " + r.error);
    else if (!r.converged) rep.warnings.push_back("row beta=" + std::to_string(r.beta) + " did not converge");
  }
  if (rep.fit_minus.points > 0 && rep.fit_minus.points < 4) rep.warnings.push_back("minus-side fit uses fewer than 4 points");
  if (rep.fit_plus.points > 0 && rep.fit_plus.points < 4) rep.warnings.push_back("plus-side fit uses fewer than 4 points");
  return rep;
}

// ---------------------------------------------------------------------------
// Output

nlohmann::json to_json(const SplittingReport& r) {
  nlohmann::json js = nlohmann::json::array();
  for (const auto& [t, v] : r.js_profile) js.push_back({t, v});
  return {{"e_gl", r.e_gl},
          {"e_discrete", r.e_discrete},
          {"f0_quartic_term", r.f0_quartic_term},
          {"e0_u", r.e0_u},
          {"e0_gradient", r.e0_gradient},
          {"e0_current", r.e0_current},
          {"e0_quartic", r.e0_quartic},
          {"bisectrix_term", r.bisectrix_term},
          {"identity_residual", r.identity_residual},
          {"identity_residual_with_bisectrix", r.identity_residual_with_bis},
          {"e0_lower_bound", r.e0_lower_bound},
          {"masked_fraction", r.masked_fraction},
          {"bisectrix_modulus_mismatch", r.bisectrix_modulus_mismatch},
          {"js_profile", js}};
}

nlohmann::json to_json(const DecayFit& r) {
  return {{"rate", r.rate},       {"prefactor", r.prefactor}, {"residual", r.residual},
          {"t_lo", r.t_lo},       {"t_hi", r.t_hi},           {"samples", r.samples},
          {"max_far", r.max_far}, {"max_all", r.max_all}};
}

namespace {

nlohmann::json fit_json(const SweepFit& f) {
  return {{"slope", f.slope}, {"reference", f.reference}, {"rel_error", f.rel_error}, {"points", f.points}};
}

} // namespace

nlohmann::json to_json(const SweepReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& w : r.rows) {
    rows.push_back({{"beta", w.beta},
                    {"delta", w.delta},
                    {"side", to_string(w.side)},
                    {"gamma", w.gamma},
                    {"e_gamma", w.e_gamma},
                    {"e_corner", w.e_corner},
                    {"e_trial", w.e_trial},
                    {"e_trial_corner", w.e_trial_corner},
                    {"e_corner_ref", w.e_corner_ref},
                    {"e_trial_corner_ref", w.e_trial_corner_ref},
                    {"grad_norm", w.grad_norm},
                    {"iterations", w.iterations},
                    {"converged", w.converged},
                    {"splitting_residual", w.splitting_residual},
                    {"splitting_residual_with_bisectrix", w.splitting_residual_with_bis},
                    {"agmon_rate", w.agmon_rate},
                    {"agmon_far_ratio", w.agmon_far_ratio},
                    {"error", w.error}});
  }
  return {{"b", r.b},           {"L", r.L},         {"ell", r.ell},
          {"h", r.h},           {"e1d", r.e1d},     {"ecorr", r.ecorr},
          {"strip_offset", r.strip_offset},
          {"strip_trial_offset", r.strip_trial_offset},
          {"rows", rows},
          {"fit_minus", fit_json(r.fit_minus)},
          {"fit_plus", fit_json(r.fit_plus)},
          {"fit_minus_ref", fit_json(r.fit_minus_ref)},
          {"fit_plus_ref", fit_json(r.fit_plus_ref)},
          {"warnings", r.warnings}};
}

void write_sweep_csv(std::ostream& os, const SweepReport& r) {
  const auto old = os.precision(17);
  os << "beta,delta,side,gamma,e_gamma,e_corner,e_trial,e_trial_corner,e_corner_ref,e_trial_corner_ref,grad_norm,iterations,converged,"
        "splitting_residual,splitting_residual_with_bisectrix,agmon_rate,agmon_far_ratio,error\n";
  for (const auto& w : r.rows) {
    os << w.beta << ',' << w.delta << ',' << to_string(w.side) << ',' << w.gamma << ',' << w.e_gamma << ','
       << w.e_corner << ',' << w.e_trial << ',' << w.e_trial_corner << ',' << w.e_corner_ref << ','
       << w.e_trial_corner_ref << ',' << w.grad_norm << ',' << w.iterations
       << ',' << (w.converged ? 1 : 0) << ',' << w.splitting_residual << ',' << w.splitting_residual_with_bis << ','
       << w.agmon_rate << ',' << w.agmon_far_ratio << ",\"" << w.error << "\"\n";
  }
  os.precision(old);
}

} // namespace cornergl

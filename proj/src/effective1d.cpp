#include "cornergl/effective1d.hpp"

#include "cornergl/error.hpp"
#include "cornergl/quadrature.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

namespace cornergl {

namespace {

constexpr const char* kModule = "effective1d";

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, kModule, msg);
}

// Symmetric tridiagonal system with constant off-diagonal `off`.
// Thomas algorithm; the matrices here are diagonally dominant or SPD.
void solve_tridiagonal(std::vector<double> diag, double off, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = off / diag[i - 1];
    diag[i] -= m * off;
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - off * rhs[i + 1]) / diag[i];
}

// The weighted (symmetric) form of the discrete Euler-Lagrange system,
//   r_i = (D f)_i + w_i q_i(f),
// with D the P1 stiffness matrix; equivalent to central differences with
// ghost nodes f_{-1} = f_1, f_n = f_{n-2}.
struct Discretisation {
  const Grid1D& grid;
  double alpha;
  double b;
  std::vector<double> w;
  std::vector<double> pot; // (t + alpha)^2

  Discretisation(const Grid1D& g, double a, double bb)
      : grid(g), alpha(a), b(bb), w(g.weights()), pot(g.size()) {
    for (int i = 0; i < g.size(); ++i) {
      const double s = g.node(i) + a;
      pot[i] = s * s;
    }
  }

  double inv_h() const { return 1.0 / grid.spacing(); }

  std::vector<double> stiffness_diag() const {
    std::vector<double> d(grid.size(), 2.0 * inv_h());
    d.front() = d.back() = inv_h();
    return d;
  }

  std::vector<double> residual(const std::vector<double>& f) const {
    const int n = grid.size();
    const double ih = inv_h();
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) {
      double lap = 0.0;
      if (i > 0) lap += (f[i] - f[i - 1]) * ih;
      if (i + 1 < n) lap += (f[i] - f[i + 1]) * ih;
      const double q = pot[i] * f[i] - (1.0 - f[i] * f[i]) * f[i] / b;
      r[i] = lap + w[i] * q;
    }
    return r;
  }

  // Diagonal of the Jacobian D + W (pot - (1 - 3 f^2) / b).
  std::vector<double> jacobian_diag(const std::vector<double>& f) const {
    auto d = stiffness_diag();
    for (int i = 0; i < grid.size(); ++i)
      d[i] += w[i] * (pot[i] - (1.0 - 3.0 * f[i] * f[i]) / b);
    return d;
  }
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double l2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Decreasing iteration from the supersolution f = 1. With shift c >= 2/b the
// map is monotone, so the iterates stay ordered and converge to the maximal
// nonnegative solution.
int monotone_iterate(const Discretisation& disc, std::vector<double>& f, double tol, int max_it) {
  const int n = disc.grid.size();
  const double c = 2.0 / disc.b;
  auto diag = disc.stiffness_diag();
  for (int i = 0; i < n; ++i) diag[i] += disc.w[i] * (disc.pot[i] + c);
  std::vector<double> rhs(n);
  int it = 0;
  for (; it < max_it; ++it) {
    for (int i = 0; i < n; ++i)
      rhs[i] = disc.w[i] * ((1.0 - f[i] * f[i]) * f[i] / disc.b + c * f[i]);
    solve_tridiagonal(diag, -disc.inv_h(), rhs);
    double change = 0.0;
    for (int i = 0; i < n; ++i) change = std::max(change, std::abs(rhs[i] - f[i]));
    f.swap(rhs);
    if (change < tol) return it + 1;
  }
  return it;
}

struct NewtonOutcome {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

NewtonOutcome newton(const Discretisation& disc, std::vector<double>& f, const SolverOptions1D& opts) {
  NewtonOutcome out;
  auto r = disc.residual(f);
  double rnorm = l2(r);
  out.residual = max_abs(r);
  for (int it = 0; it < opts.max_newton; ++it) {
    if (out.residual <= opts.newton_tol) {
      out.converged = true;
      out.iterations = it;
      return out;
    }
    auto step = r;
    for (double& x : step) x = -x;
    solve_tridiagonal(disc.jacobian_diag(f), -disc.inv_h(), step);

    double lambda = 1.0;
    std::vector<double> trial(f.size());
    bool accepted = false;
    while (lambda >= 1.0 / 1024.0) {
      for (std::size_t i = 0; i < f.size(); ++i) trial[i] = f[i] + lambda * step[i];
      auto rt = disc.residual(trial);
      const double tn = l2(rt);
      if (tn < (1.0 - 1e-4 * lambda) * rnorm || max_abs(rt) <= opts.newton_tol) {
        f.swap(trial);
        r.swap(rt);
        rnorm = tn;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    out.iterations = it + 1;
    out.residual = max_abs(r);
    if (!accepted) {
      // Stagnation at round-off: accept when already tiny.
      out.converged = out.residual <= 1e3 * opts.newton_tol;
      return out;
    }
  }
  out.converged = out.residual <= opts.newton_tol;
  return out;
}

double trapezoid_of(const std::vector<double>& w, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) s += w[i] * y[i];
  return s;
}

} // namespace

// ---------------------------------------------------------------------------
// Grid1D / Profile1D

Grid1D::Grid1D(double ell, int n) : ell_(ell), n_(n), h_(0.0) {
  if (!(ell > 0.0) || !std::isfinite(ell))
    fail(ErrorKind::InvalidParams, "grid length must be positive");
  if (n < kMinNodes)
    fail(ErrorKind::InvalidParams, "grid needs at least " + std::to_string(kMinNodes) + " nodes");
  h_ = ell / (n - 1);
}

Grid1D Grid1D::with_spacing(double ell, double h) {
  const int n = std::max(kMinNodes, static_cast<int>(std::lround(ell / h)) + 1);
  return Grid1D(ell, n);
}

std::vector<double> Grid1D::nodes() const {
  std::vector<double> t(n_);
  for (int i = 0; i < n_; ++i) t[i] = node(i);
  return t;
}

std::vector<double> Grid1D::weights() const {
  std::vector<double> w(n_, h_);
  w.front() = w.back() = 0.5 * h_;
  return w;
}

Profile1D::Profile1D(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
  if (static_cast<int>(values.size()) != grid.size())
    fail(ErrorKind::InvalidParams, "profile size does not match its grid");
}

double Profile1D::nodal_slope(int i) const {
  const int n = grid.size();
  const double h = grid.spacing();
  const auto& f = values;
  if (i == 0) return (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h);
  if (i == 1) return (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h);
  if (i == n - 2)
    return (3 * f[n - 1] + 10 * f[n - 2] - 18 * f[n - 3] + 6 * f[n - 4] - f[n - 5]) / (12 * h);
  if (i == n - 1)
    return (25 * f[n - 1] - 48 * f[n - 2] + 36 * f[n - 3] - 16 * f[n - 4] + 3 * f[n - 5]) / (12 * h);
  return (f[i - 2] - 8 * f[i - 1] + 8 * f[i + 1] - f[i + 2]) / (12 * h);
}

std::vector<double> Profile1D::derivative() const {
  std::vector<double> d(values.size());
  for (int i = 0; i < grid.size(); ++i) d[i] = nodal_slope(i);
  return d;
}

Profile1D::Sample Profile1D::sample(double t) const {
  const double h = grid.spacing();
  const int n = grid.size();
  t = std::clamp(t, 0.0, grid.ell());
  int i = std::min(static_cast<int>(t / h), n - 2);
  const double x = (t - grid.node(i)) / h;
  const double f0 = values[i], f1 = values[i + 1];
  const double m0 = nodal_slope(i) * h, m1 = nodal_slope(i + 1) * h;
  const double x2 = x * x, x3 = x2 * x;
  const double h00 = 2 * x3 - 3 * x2 + 1, h10 = x3 - 2 * x2 + x;
  const double h01 = -2 * x3 + 3 * x2, h11 = x3 - x2;
  const double value = h00 * f0 + h10 * m0 + h01 * f1 + h11 * m1;
  const double dh00 = 6 * x2 - 6 * x, dh10 = 3 * x2 - 4 * x + 1;
  const double dh01 = -6 * x2 + 6 * x, dh11 = 3 * x2 - 2 * x;
  const double slope = (dh00 * f0 + dh10 * m0 + dh01 * f1 + dh11 * m1) / h;
  return {value, slope};
}

double Profile1D::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

// ---------------------------------------------------------------------------
// Energy and profile solve

double energy_1d(const Profile1D& f, double alpha, double b) {
  const Discretisation disc(f.grid, alpha, b);
  const auto& v = f.values;
  const double ih = disc.inv_h();
  double e = 0.0;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double d = v[i + 1] - v[i];
    e += d * d * ih;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f2 = v[i] * v[i];
    e += disc.w[i] * (disc.pot[i] * f2 - (2.0 * f2 - f2 * f2) / (2.0 * b));
  }
  return e;
}

bool zero_profile_unstable(double alpha, double b, const Grid1D& grid) {
  // LDL^T pivots of D + W (pot - 1/b); a negative pivot means a negative
  // eigenvalue (Sylvester's law of inertia).
  const Discretisation disc(grid, alpha, b);
  auto d = disc.stiffness_diag();
  const double off = -disc.inv_h();
  double pivot = 0.0;
  for (int i = 0; i < grid.size(); ++i) {
    d[i] += disc.w[i] * (disc.pot[i] - 1.0 / b);
    pivot = i == 0 ? d[0] : d[i] - off * off / pivot;
    if (pivot <= 0.0) return true;
  }
  return false;
}

double phase_moment(const Profile1D& f, double alpha) {
  std::vector<double> y(f.values.size());
  for (int i = 0; i < f.grid.size(); ++i) {
    const double v = f.values[i];
    y[i] = (f.grid.node(i) + alpha) * v * v;
  }
  return quad::integrate(y, f.grid.spacing());
}

ProfileSolve solve_profile(double alpha, double b, const Grid1D& grid,
                           const SolverOptions1D& opts, const Profile1D* warm) {
  if (!(b > 0.0) || !std::isfinite(b) || !std::isfinite(alpha))
    fail(ErrorKind::InvalidParams, "coupling b must be positive and alpha finite");
  if (grid.ell() < 4.0)
    fail(ErrorKind::InvalidParams, "profile solve needs ell >= 4");

  ProfileSolve out{Profile1D(grid), 0.0, 0.0, 0, 0, true, {}};
  if (b <= 1.0)
    out.warnings.push_back("b <= 1 lies outside the surface superconductivity window");

  if (!zero_profile_unstable(alpha, b, grid)) return out;

  const Discretisation disc(grid, alpha, b);
  std::vector<double> f;
  bool ok = false;

  if (warm != nullptr && warm->grid.size() == grid.size() && warm->max_value() > 0.0) {
    f = warm->values;
    const auto nw = newton(disc, f, opts);
    out.newton_iterations += nw.iterations;
    out.residual = nw.residual;
    ok = nw.converged && *std::min_element(f.begin(), f.end()) >= -1e-10 * max_abs(f) &&
         max_abs(f) > 1e-8;
  }

  if (!ok) {
    f.assign(grid.size(), 1.0);
    double switch_tol = opts.monotone_switch;
    for (int attempt = 0; attempt < 6 && !ok; ++attempt) {
      out.monotone_iterations += monotone_iterate(disc, f, switch_tol, opts.max_monotone);
      auto g = f;
      const auto nw = newton(disc, g, opts);
      out.newton_iterations += nw.iterations;
      out.residual = nw.residual;
      if (nw.converged && *std::min_element(g.begin(), g.end()) >= -1e-10 * max_abs(g)) {
        f.swap(g);
        ok = true;
      }
      switch_tol *= 0.01;
    }
  }
  if (!ok) {
    std::ostringstream os;
    os << "profile Newton did not converge (alpha=" << alpha << ", b=" << b
       << ", residual=" << out.residual << ")";
    fail(ErrorKind::NonConvergence, os.str());
  }

  Profile1D prof(grid, std::move(f));
  const double e = energy_1d(prof, alpha, b);
  if (e < opts.nontrivial_energy) {
    out.profile = std::move(prof);
    out.energy = e;
    out.trivial = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Minimisation over alpha

namespace {

// Solves on the grid and its bisection at one alpha and combines them.
class TwoGrid {
public:
  TwoGrid(const Grid1D& coarse, double b, const SolverOptions1D& opts)
      : coarse_(coarse), fine_(coarse.ell(), 2 * coarse.size() - 1), b_(b), opts_(opts),
        warm_c_(coarse_), warm_f_(fine_) {}

  struct Eval {
    double alpha = 0.0;
    double energy = 0.0;
    double moment = 0.0;
    bool trivial = true;
  };

  Eval at(double a) {
    auto c = solve_profile(a, b_, coarse_, opts_, have_warm_ ? &warm_c_ : nullptr);
    auto f = solve_profile(a, b_, fine_, opts_, have_warm_ ? &warm_f_ : nullptr);
    last_c_ = std::move(c);
    last_f_ = std::move(f);
    Eval e;
    e.alpha = a;
    if (last_c_->trivial || last_f_->trivial) return e;
    e.trivial = false;
    e.energy = (4.0 * last_f_->energy - last_c_->energy) / 3.0;
    e.moment = (4.0 * phase_moment(last_f_->profile, a) - phase_moment(last_c_->profile, a)) / 3.0;
    warm_c_ = last_c_->profile;
    warm_f_ = last_f_->profile;
    have_warm_ = true;
    return e;
  }

  void forget_warm() { have_warm_ = false; }

  // Extrapolated nodal profile on the coarse grid from the last evaluation.
  Profile1D combined() const {
    const auto& c = last_c_->profile.values;
    const auto& f = last_f_->profile.values;
    std::vector<double> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      v[i] = std::clamp((4.0 * f[2 * i] - c[i]) / 3.0, 0.0, 1.0);
    return Profile1D(coarse_, std::move(v));
  }

  double residual() const { return std::max(last_c_->residual, last_f_->residual); }

private:
  Grid1D coarse_;
  Grid1D fine_;
  double b_;
  SolverOptions1D opts_;
  Profile1D warm_c_;
  Profile1D warm_f_;
  bool have_warm_ = false;
  std::optional<ProfileSolve> last_c_;
  std::optional<ProfileSolve> last_f_;
};

} // namespace

Effective1DSolution minimize_1d(double ell, double b, const Grid1D& grid,
                                const SolverOptions1D& opts) {
  if (std::abs(grid.ell() - ell) > 1e-12 * ell)
    fail(ErrorKind::InvalidParams, "grid does not cover [0, ell]");

  Effective1DSolution sol;
  sol.b = b;
  sol.ell = ell;
  sol.f0 = Profile1D(grid);
  if (b <= 1.0) sol.warnings.push_back("b <= 1 lies outside the surface superconductivity window");

  // Window of alphas with an unstable zero solution.
  double win_lo = std::numeric_limits<double>::infinity();
  double win_hi = -win_lo;
  const int n_scan = static_cast<int>(std::lround((opts.alpha_hi - opts.alpha_lo) / opts.alpha_scan_step));
  for (int k = 0; k <= n_scan; ++k) {
    const double a = opts.alpha_lo + k * opts.alpha_scan_step;
    if (zero_profile_unstable(a, b, grid)) {
      win_lo = std::min(win_lo, a);
      win_hi = std::max(win_hi, a);
    }
  }

  auto degenerate = [&](const std::string& why) {
    sol.degenerate = true;
    sol.alpha0 = std::numeric_limits<double>::quiet_NaN();
    sol.e1d = 0.0;
    sol.ecorr = sol.ecorr_algebraic = std::numeric_limits<double>::quiet_NaN();
    sol.warnings.push_back(why);
    return sol;
  };
  if (!std::isfinite(win_lo)) return degenerate("no nontrivial profile for any alpha in the scan range");

  // Energy scan across the window, padded by one scan step each side.
  TwoGrid pair(grid, b, opts);
  const double lo = std::max(opts.alpha_lo, win_lo - opts.alpha_scan_step);
  const double hi = std::min(opts.alpha_hi, win_hi + opts.alpha_scan_step);
  const int m = 24;
  std::vector<TwoGrid::Eval> scan;
  for (int k = 0; k <= m; ++k) {
    scan.push_back(pair.at(lo + (hi - lo) * k / m));
    if (scan.back().trivial) pair.forget_warm();
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < scan.size(); ++k)
    if (scan[k].energy < scan[best].energy) best = k;
  if (scan[best].trivial) return degenerate("nontrivial branch lost: energy above threshold");

  for (std::size_t k = 0; k + 1 < scan.size(); ++k) {
    if (scan[k].trivial || scan[k + 1].trivial) continue;
    if ((scan[k].moment < 0.0) != (scan[k + 1].moment < 0.0)) ++sol.moment_sign_changes;
  }
  if (sol.moment_sign_changes > 1)
    sol.warnings.push_back("g(alpha) changes sign " + std::to_string(sol.moment_sign_changes) +
                           " times on the nontrivial branch");

  // Brent on E(alpha) between the neighbours of the best scan point.
  const double a_left = scan[best == 0 ? 0 : best - 1].alpha;
  const double a_right = scan[std::min(best + 1, scan.size() - 1)].alpha;
  pair.at(scan[best].alpha);
  auto energy_at = [&](double a) { return pair.at(a).energy; };
  const double a_min = boost::math::tools::brent_find_minima(energy_at, a_left, a_right, 40).first;

  // Bracketed root of g(alpha) = (1/2) dE/dalpha around the minimiser.
  auto moment_at = [&](double a) { return pair.at(a).moment; };
  double alpha0 = a_min;
  double g_lo = moment_at(a_min);
  if (std::abs(g_lo) > 1e-2 * opts.alpha_tol) {
    double br_lo = a_min, br_hi = a_min, g_hi = g_lo;
    double width = 1e-7;
    bool bracketed = false;
    for (int k = 0; k < 40 && !bracketed; ++k, width *= 2.0) {
      br_lo = a_min - width;
      br_hi = a_min + width;
      g_lo = moment_at(br_lo);
      g_hi = moment_at(br_hi);
      bracketed = (g_lo < 0.0) != (g_hi < 0.0);
    }
    if (!bracketed) fail(ErrorKind::NonConvergence, "could not bracket the phase optimality root");
    std::uintmax_t max_iter = 200;
    auto tol = [](double x0, double x1) { return std::abs(x1 - x0) < 1e-15; };
    auto root_fn = [&](double a) {
      const double g = moment_at(a);
      return std::abs(g) <= 1e-2 * opts.alpha_tol ? 0.0 : g;
    };
    const auto r = boost::math::tools::toms748_solve(root_fn, br_lo, br_hi, g_lo, g_hi, tol, max_iter);
    alpha0 = 0.5 * (r.first + r.second);
  }

  // Final evaluation and diagnostics.
  const auto fin = pair.at(alpha0);
  if (fin.trivial) return degenerate("nontrivial branch lost at the optimal phase");
  sol.alpha0 = alpha0;
  sol.f0 = pair.combined();
  sol.e1d = fin.energy;
  sol.residual = pair.residual();
  sol.alpha_moment = phase_moment(sol.f0, alpha0);
  if (std::abs(sol.alpha_moment) > opts.alpha_tol)
    sol.warnings.push_back("phase optimality above tolerance");

  const auto& v = sol.f0.values;
  const auto w = grid.weights();
  std::vector<double> f4(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) f4[i] = std::pow(v[i], 4);
  sol.energy_identity = std::abs(sol.e1d + trapezoid_of(w, f4) / (2.0 * b));
  const auto d = sol.f0.derivative();
  sol.neumann_left = d.front();
  sol.neumann_right = d.back();
  const auto imax = static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
  sol.t_max = grid.node(imax);
  sol.f0_at_0 = v.front();

  const auto ec = compute_ecorr(sol);
  sol.ecorr = ec.integral;
  sol.ecorr_algebraic = ec.algebraic;
  return sol;
}

Effective1DSolution minimize_1d(double ell, double b) {
  return minimize_1d(ell, b, Grid1D::with_spacing(ell, kDefaultSpacing1D));
}

Effective1DSolution half_line_solution(double b) {
  return minimize_1d(16.0, b);
}

EcorrForms compute_ecorr(const Effective1DSolution& sol) {
  if (sol.degenerate || sol.f0.max_value() <= 0.0)
    fail(ErrorKind::DegenerateMinimizer, "E_corr is undefined on the zero profile");
  const auto& grid = sol.f0.grid;
  const auto& f = sol.f0.values;
  const auto df = sol.f0.derivative();
  const double a = sol.alpha0, b = sol.b;
  std::vector<double> y(f.size());
  for (int i = 0; i < grid.size(); ++i) {
    const double t = grid.node(i);
    const double f2 = f[i] * f[i];
    y[i] = t * (df[i] * df[i] + f2 * (-a * (t + a) - 1.0 / b + f2 / (2.0 * b)));
  }
  EcorrForms out{};
  out.integral = quad::integrate(y, grid.spacing());
  out.algebraic = f.front() * f.front() / 3.0 - a * sol.e1d;
  out.rel_discrepancy = std::abs(out.integral - out.algebraic) / std::abs(out.integral);
  return out;
}

// ---------------------------------------------------------------------------
// Serialisation

nlohmann::json to_json(const Effective1DSolution& sol, bool with_profile) {
  auto num = [](double x) -> nlohmann::json {
    return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
  };
  nlohmann::json j;
  j["b"] = sol.b;
  j["ell"] = sol.ell;
  j["n"] = sol.f0.grid.size();
  j["alpha0"] = num(sol.alpha0);
  j["e1d"] = sol.e1d;
  j["ecorr"] = num(sol.ecorr);
  j["ecorr_algebraic"] = num(sol.ecorr_algebraic);
  j["t_max"] = sol.t_max;
  j["f0_at_0"] = sol.f0_at_0;
  j["degenerate"] = sol.degenerate;
  j["diagnostics"] = {{"alpha_moment", sol.alpha_moment},
                      {"energy_identity", sol.energy_identity},
                      {"neumann_left", sol.neumann_left},
                      {"neumann_right", sol.neumann_right},
                      {"residual", sol.residual},
                      {"moment_sign_changes", sol.moment_sign_changes}};
  j["warnings"] = sol.warnings;
  if (with_profile) j["f0"] = sol.f0.values;
  return j;
}

Effective1DSolution solution_from_json(const nlohmann::json& j) {
  auto num = [&](const char* key) {
    const auto& v = j.at(key);
    return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>();
  };
  Effective1DSolution sol;
  sol.b = j.at("b").get<double>();
  sol.ell = j.at("ell").get<double>();
  const Grid1D grid(sol.ell, j.at("n").get<int>());
  sol.f0 = Profile1D(grid, j.at("f0").get<std::vector<double>>());
  sol.alpha0 = num("alpha0");
  sol.e1d = j.at("e1d").get<double>();
  sol.ecorr = num("ecorr");
  sol.ecorr_algebraic = num("ecorr_algebraic");
  sol.t_max = j.at("t_max").get<double>();
  sol.f0_at_0 = j.at("f0_at_0").get<double>();
  sol.degenerate = j.at("degenerate").get<bool>();
  if (j.contains("diagnostics")) {
    const auto& d = j["diagnostics"];
    sol.alpha_moment = d.value("alpha_moment", 0.0);
    sol.energy_identity = d.value("energy_identity", 0.0);
    sol.neumann_left = d.value("neumann_left", 0.0);
    sol.neumann_right = d.value("neumann_right", 0.0);
    sol.residual = d.value("residual", 0.0);
    sol.moment_sign_changes = d.value("moment_sign_changes", 0);
  }
  if (j.contains("warnings")) sol.warnings = j["warnings"].get<std::vector<std::string>>();
  return sol;
}

void write_profile_csv(std::ostream& os, const Effective1DSolution& sol) {
  const auto d = sol.f0.derivative();
  const auto old = os.precision(17);
  os << "t,f0,df0\n";
  for (int i = 0; i < sol.f0.grid.size(); ++i)
    os << sol.f0.grid.node(i) << ',' << sol.f0.values[i] << ',' << d[i] << '\n';
  os.precision(old);
}

} // namespace cornergl

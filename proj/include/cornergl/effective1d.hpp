#pragma once

// One-dimensional effective model on [0, ell]:
//
//   F_alpha[f] = int_0^ell |f'|^2 + (t + alpha)^2 f^2 - (1/2b)(2 f^2 - f^4) dt
//
// minimised over f for fixed alpha (solve_profile) and then over alpha
// (minimize_1d). Discretisation: uniform nodes, second-order central
// differences with ghost-node Neumann closure. The discrete energy is the
// exact P1 Dirichlet form plus trapezoid weights on the potential, so the
// finite-difference equations are exactly its stationarity conditions.
//
// The scheme's error expands in even powers of h, and its solution carries a
// boundary slope f_h'(0) ~ -h^2 f'''(0) / 6. minimize_1d therefore solves on
// the grid and on its bisection at a common alpha and returns the Richardson
// combination (4 X_{h/2} - X_h) / 3 of profile, energy and moments.

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cornergl {

/// Uniform grid on [0, ell] with n nodes.
class Grid1D {
public:
  static constexpr int kMinNodes = 64;

  Grid1D(double ell, int n);

  /// Grid of the given length whose spacing is as close as possible to h.
  static Grid1D with_spacing(double ell, double h);

  double ell() const noexcept { return ell_; }
  int size() const noexcept { return n_; }
  double spacing() const noexcept { return h_; }
  double node(int i) const noexcept { return i == n_ - 1 ? ell_ : i * h_; }
  std::vector<double> nodes() const;
  /// Trapezoid weights; these define every "energy-type" integral.
  std::vector<double> weights() const;

private:
  double ell_;
  int n_;
  double h_;
};

/// Nodal samples of a real profile f on a Grid1D.
struct Profile1D {
  Grid1D grid;
  std::vector<double> values;

  explicit Profile1D(Grid1D g) : grid(g), values(g.size(), 0.0) {}
  Profile1D(Grid1D g, std::vector<double> v);

  /// Nodal derivative, fourth order: five-point central differences inside,
  /// one-sided five-point stencils near the ends.
  std::vector<double> derivative() const;

  /// Cubic Hermite interpolant built from values and derivative(); clamps
  /// t to [0, ell].
  double operator()(double t) const { return sample(t).value; }

  struct Sample {
    double value;
    double slope;
  };
  Sample sample(double t) const;

  double max_value() const;

private:
  double nodal_slope(int i) const;
};

struct SolverOptions1D {
  double newton_tol = 1e-12;     ///< max_i w_i |R_i| at acceptance
  int max_newton = 100;
  int max_monotone = 200000;
  double monotone_switch = 1e-4; ///< hand over to Newton below this update size
  double alpha_tol = 1e-10;      ///< |int (t+alpha) f^2| at acceptance
  double nontrivial_energy = -1e-10;
  double alpha_lo = -3.0;
  double alpha_hi = 0.0;
  double alpha_scan_step = 0.005;
};

struct ProfileSolve {
  Profile1D profile;
  double energy = 0.0;
  double residual = 0.0;
  int newton_iterations = 0;
  int monotone_iterations = 0;
  bool trivial = true;
  std::vector<std::string> warnings;
};

/// Nonnegative solution of -f'' + (t+alpha)^2 f = (1/b)(1-f^2) f,
/// f'(0) = f'(ell) = 0. Returns the zero profile when the zero solution is
/// stable (no nontrivial branch) or the nontrivial energy is above
/// opts.nontrivial_energy. `warm` seeds Newton when given.
ProfileSolve solve_profile(double alpha, double b, const Grid1D& grid,
                           const SolverOptions1D& opts = {},
                           const Profile1D* warm = nullptr);

/// Discrete energy F_alpha[f]: exact piecewise-linear Dirichlet term,
/// trapezoid rule on the potential terms. Second order in h.
double energy_1d(const Profile1D& f, double alpha, double b);

/// True when the linearisation at f = 0 has a negative direction, i.e. a
/// nontrivial minimiser exists for this (alpha, b). Exact inertia count of
/// the discrete operator.
bool zero_profile_unstable(double alpha, double b, const Grid1D& grid);

/// g(alpha) = int (t + alpha) f^2 (fourth-order rule).
double phase_moment(const Profile1D& f, double alpha);

struct EcorrForms {
  double integral;  ///< int t { f'^2 + f^2 (-alpha (t+alpha) - 1/b + f^2/(2b)) }
  double algebraic; ///< f(0)^2 / 3 - alpha e1d
  double rel_discrepancy;
};

struct Effective1DSolution {
  double b = 0.0;
  double ell = 0.0;
  double alpha0 = 0.0;
  Profile1D f0{Grid1D(1.0, Grid1D::kMinNodes)};
  double e1d = 0.0;
  double ecorr = 0.0;
  double ecorr_algebraic = 0.0;
  double t_max = 0.0;
  double f0_at_0 = 0.0;
  bool degenerate = false;

  // Diagnostics.
  double alpha_moment = 0.0;      ///< int (t + alpha0) f0^2
  double energy_identity = 0.0;   ///< |e1d + (1/2b) int f0^4|
  double neumann_left = 0.0;
  double neumann_right = 0.0;
  double residual = 0.0;
  int moment_sign_changes = 0;    ///< roots of g(alpha) seen on the scan
  std::vector<std::string> warnings;
};

/// Nested minimisation: alpha window by inertia scan over
/// [opts.alpha_lo, opts.alpha_hi], energy scan + Brent, then a bracketed
/// root of g(alpha). Degenerate (zero) minimisers are flagged, not thrown.
Effective1DSolution minimize_1d(double ell, double b, const Grid1D& grid,
                                const SolverOptions1D& opts = {});

/// Convenience overload: default resolution (spacing of n = 2048 on ell = 10).
Effective1DSolution minimize_1d(double ell, double b);

/// Half-line quantities (alpha_star, f_star, E_star) approximated on
/// [0, 16]; the truncation error decays like exp(-ell^2).
Effective1DSolution half_line_solution(double b);

/// Both forms of E_corr. Throws DegenerateMinimizer on a zero profile.
EcorrForms compute_ecorr(const Effective1DSolution& sol);

/// Default spacing used throughout: ell = 10 with 2048 nodes.
inline constexpr double kDefaultSpacing1D = 10.0 / 2047.0;

nlohmann::json to_json(const Effective1DSolution& sol, bool with_profile = true);
Effective1DSolution solution_from_json(const nlohmann::json& j);
void write_profile_csv(std::ostream& os, const Effective1DSolution& sol);

} // namespace cornergl

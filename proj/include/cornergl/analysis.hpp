#pragma once

#include "cornergl/effective1d.hpp"
#include "cornergl/geometry.hpp"
#include "cornergl/glsolver.hpp"
#include "cornergl/mesh.hpp"

#include "json.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace cornergl {

/// Glued trial state: f0(t) e^{i Phi_pm} outside the transition sectors
/// theta in (theta_lt, theta_gt), f0(t) e^{i Xi} inside, with
///   Xi = [alpha0 rho sin((ds+gamma)/2) + rho^2 sin(ds+gamma)/4] (2 theta - theta_lt - theta_gt) / gamma.
class TrialState {
public:
  TrialState(const WedgeGeometry& g, const Effective1DSolution& sol, double gamma);

  double gamma() const { return gamma_; }
  const WedgeGeometry& geometry() const { return geom_; }

  /// Phase Phi_patch = -alpha0 s - s t / 2.
  double patch_phase(PatchCoords c) const;
  /// Phase of the trial state at a located point.
  double phase(const MappedPoint& m) const;
  cplx value(Vec2 p) const;
  cplx value(const MappedPoint& m) const;
  /// Values at mesh nodes, psi_star on Dirichlet nodes.
  std::vector<cplx> on_mesh(const Mesh& mesh) const;

private:
  WedgeGeometry geom_;
  Effective1DSolution sol_;
  double gamma_;
  double amp_lin_;
  double amp_quad_;
};

/// gamma = delta^{2/3}, or delta^{2/3} |log delta|^2 with `log_variant`;
/// zero for delta = 0. Clamped below beta / 2.
double default_gamma(double delta, double beta, bool log_variant = false);

TrialState trial_state(const WedgeGeometry& g, const Effective1DSolution& sol, double gamma);

/// Discrete energy of the trial state on the mesh.
double trial_energy(const TrialState& trial, const Mesh& mesh, double b);

struct SplittingReport {
  double e_gl = 0.0;            ///< G of the reconstruction f0 u e^{i Phi}
  double e_discrete = 0.0;      ///< discrete energy of the nodal field
  double f0_quartic_term = 0.0; ///< -(1/2b) int f0^4(t)
  double e0_u = 0.0;            ///< E_0[u+; Gamma+] + E_0[u-; Gamma-]
  double e0_gradient = 0.0;
  double e0_current = 0.0;
  double e0_quartic = 0.0;      ///< (1/2b) int f0^4 (1 - |u|^2)^2 >= 0
  double bisectrix_term = 0.0;  ///< sum over patches of int_bis f0 |u|^2 n . grad f0
  double identity_residual = 0.0;           ///< |e_gl - (quartic + e0)| / |e_gl|
  double identity_residual_with_bis = 0.0;  ///< same with the bisectrix term added
  double e0_lower_bound = 0.0;  ///< delta int t (t+alpha0)(t+2 alpha0) f0^2
  double masked_fraction = 0.0;
  double bisectrix_modulus_mismatch = 0.0;  ///< max ||u+| - |u-|| on bisectrix nodes
  std::vector<std::pair<double, double>> js_profile; ///< (t, mean j_s) on plus-patch rows
};

/// Throws UnderflowRegionTooLarge when more than 20% of nodes are masked.
SplittingReport splitting_diagnostic(const ComplexField& field, const WedgeGeometry& g,
                                     const Effective1DSolution& sol, double b);

struct DecayFit {
  double rate = 0.0;      ///< c in |psi| ~ A exp(-c d)
  double prefactor = 0.0;
  double residual = 0.0;  ///< rms misfit in log units
  double t_lo = 0.0;
  double t_hi = 0.0;
  int samples = 0;
  double max_far = 0.0;   ///< max |psi| at distance >= 5 from the outer boundary
  double max_all = 0.0;
};

/// Least-squares fit of log |psi| against the distance to the outer
/// boundary over t in [t0 + 1, ell_bar]. Throws InsufficientRange.
DecayFit agmon_fit(const ComplexField& field, const WedgeGeometry& g, const Effective1DSolution& sol);

struct SweepRow {
  double beta = 0.0;
  double delta = 0.0;
  Side side = Side::Minus;
  double gamma = 0.0;
  double e_gamma = 0.0;
  double e_corner = 0.0;
  double e_trial = 0.0;
  double e_trial_corner = 0.0; ///< e_trial - 2 L e1d
  /// Same two quantities minus their value on the flat strip at the same h,
  /// which removes the O(h^2) per-length discretisation offset.
  double e_corner_ref = 0.0;
  double e_trial_corner_ref = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  double splitting_residual = 0.0;
  double splitting_residual_with_bis = 0.0;
  double agmon_rate = 0.0;
  double agmon_far_ratio = 0.0;
  std::string error; ///< non-empty when the row failed
};

struct SweepFit {
  double slope = 0.0;
  double reference = 0.0;  ///< -E_corr (minus side) or +E_corr (plus side)
  double rel_error = 0.0;
  int points = 0;
};

struct SweepReport {
  double b = 0.0;
  double L = 0.0;
  double ell = 0.0;
  double h = 0.0;
  double e1d = 0.0;
  double ecorr = 0.0;
  std::vector<SweepRow> rows; ///< sorted by beta
  double strip_offset = 0.0;       ///< e_corner of the delta = 0 row
  double strip_trial_offset = 0.0;
  SweepFit fit_minus;
  SweepFit fit_plus;
  SweepFit fit_minus_ref;          ///< fits of e_corner_ref
  SweepFit fit_plus_ref;
  std::vector<std::string> warnings;
};

struct SweepOptions {
  int jobs = 1;
  GLOptions gl;
  bool log_gamma = false;
  bool diagnostics = true; ///< splitting identity and Agmon fit per row
  double h1d = kDefaultSpacing1D;
};

/// Least-squares slope through the origin of e_corner against delta on one side.
SweepFit fit_through_origin(const std::vector<SweepRow>& rows, Side side, double ecorr,
                            bool referenced = false);

SweepReport conjecture_sweep(double b, const std::vector<double>& deltas, const std::vector<Side>& sides,
                             double L, double ell, double h, const SweepOptions& opts = {});

nlohmann::json to_json(const SplittingReport& r);
nlohmann::json to_json(const DecayFit& r);
nlohmann::json to_json(const SweepReport& r);
void write_sweep_csv(std::ostream& os, const SweepReport& r);

} // namespace cornergl

#pragma once

// Potential F0(t) = 2 int_0^t (eta + alpha0) f0^2 and cost function
// K0 = (1 - d_ell) f0^2 + F0 built from a 1D solution.

#include "cornergl/effective1d.hpp"

#include "json.hpp"

#include <iosfwd>
#include <vector>

namespace cornergl {

struct CostFunctionData {
  Effective1DSolution sol;
  std::vector<double> F0;          ///< forward sum for t <= -alpha0, backward beyond
  std::vector<double> F0_forward;  ///< 2 int_0^t
  std::vector<double> F0_backward; ///< -2 int_t^ell
  std::vector<double> K0;
  double d_ell = 0.0;
  double ell_bar = 0.0;
  int ell_bar_index = 0;
  double representation_gap = 0.0; ///< max |F0_forward - F0_backward|
};

/// d_ell defaults to ell^-4.
CostFunctionData build_cost_function(const Effective1DSolution& sol, double d_ell = -1.0);

struct PositivityReport {
  double min_K0 = 0.0;
  int argmin = 0;
  double t_argmin = 0.0;
  double threshold = -1e-10;
  bool pass = false;
};

/// min of K0 over the nodes of [0, ell_bar].
PositivityReport verify_positivity(const CostFunctionData& data);

struct BoundReport {
  double max_ratio_inside = 0.0; ///< max |F0| / f0^2 on I_ell_bar
  double t_max_ratio = 0.0;
  bool pass_inside = false;
  double C_complement = 0.0;     ///< smallest C with |F0| <= C ell f0^2 beyond ell_bar
  int skipped_underflow = 0;     ///< complement nodes with f0 = 0
};

BoundReport verify_F0_bound(const CostFunctionData& data);

struct SensitivityRow {
  double d_ell;
  double min_K0;
  bool pass;
};

/// Positivity margin for d_ell on a uniform grid of [0, 2 ell^-4].
std::vector<SensitivityRow> d_ell_sensitivity(const Effective1DSolution& sol, int samples = 5);

/// max f0(t) / f0(0) over t in [ell_bar + 2, ell]; zero when the range is empty.
double tail_ratio(const CostFunctionData& data);

void write_cost_csv(std::ostream& os, const CostFunctionData& data);
nlohmann::json cost_report_json(const CostFunctionData& data, const PositivityReport& pos,
                                const BoundReport& bound);

} // namespace cornergl

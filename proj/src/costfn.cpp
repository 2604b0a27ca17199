#include "cornergl/costfn.hpp"

#include "cornergl/error.hpp"
#include "cornergl/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace cornergl {

CostFunctionData build_cost_function(const Effective1DSolution& sol, double d_ell) {
  if (sol.degenerate || sol.f0.max_value() <= 0.0)
    throw Error(ErrorKind::DegenerateMinimizer, "costfn", "cost function needs a nontrivial profile");

  CostFunctionData data;
  data.sol = sol;
  const auto& grid = sol.f0.grid;
  const auto& f = sol.f0.values;
  const int n = grid.size();
  const double ell = sol.ell;
  data.d_ell = d_ell < 0.0 ? std::pow(ell, -4.0) : d_ell;

  std::vector<double> y(n);
  for (int i = 0; i < n; ++i) y[i] = 2.0 * (grid.node(i) + sol.alpha0) * f[i] * f[i];
  data.F0_forward = quad::cumulative_forward(y, grid.spacing());
  data.F0_backward = quad::cumulative_backward(y, grid.spacing());
  for (double& x : data.F0_backward) x = -x;

  // Each running sum is accurate where it has not yet cancelled against the
  // other half of the zero-mean integrand.
  data.F0.resize(n);
  data.K0.resize(n);
  for (int i = 0; i < n; ++i) {
    data.F0[i] = grid.node(i) <= -sol.alpha0 ? data.F0_forward[i] : data.F0_backward[i];
    data.K0[i] = (1.0 - data.d_ell) * f[i] * f[i] + data.F0[i];
    data.representation_gap =
        std::max(data.representation_gap, std::abs(data.F0_forward[i] - data.F0_backward[i]));
  }

  const double thr = ell * ell * ell * f.back();
  int ib = n - 1;
  while (ib > 0 && f[ib] < thr) --ib;
  data.ell_bar_index = ib;
  data.ell_bar = grid.node(ib);
  return data;
}

PositivityReport verify_positivity(const CostFunctionData& data) {
  PositivityReport rep;
  rep.min_K0 = data.K0[0];
  for (int i = 1; i <= data.ell_bar_index; ++i) {
    if (data.K0[i] < rep.min_K0) {
      rep.min_K0 = data.K0[i];
      rep.argmin = i;
    }
  }
  rep.t_argmin = data.sol.f0.grid.node(rep.argmin);
  rep.pass = rep.min_K0 >= rep.threshold;
  return rep;
}

BoundReport verify_F0_bound(const CostFunctionData& data) {
  BoundReport rep;
  const auto& f = data.sol.f0.values;
  const auto& grid = data.sol.f0.grid;
  for (int i = 0; i <= data.ell_bar_index; ++i) {
    const double f2 = f[i] * f[i];
    const double r = f2 > 0.0 ? std::abs(data.F0[i]) / f2 : (data.F0[i] == 0.0 ? 0.0 : INFINITY);
    if (r > rep.max_ratio_inside) {
      rep.max_ratio_inside = r;
      rep.t_max_ratio = grid.node(i);
    }
  }
  rep.pass_inside = rep.max_ratio_inside <= 1.0;
  for (int i = data.ell_bar_index + 1; i < grid.size(); ++i) {
    const double f2 = f[i] * f[i];
    if (f2 <= 0.0) {
      ++rep.skipped_underflow;
      continue;
    }
    rep.C_complement = std::max(rep.C_complement, std::abs(data.F0[i]) / (data.sol.ell * f2));
  }
  return rep;
}

std::vector<SensitivityRow> d_ell_sensitivity(const Effective1DSolution& sol, int samples) {
  std::vector<SensitivityRow> rows;
  const double dmax = 2.0 * std::pow(sol.ell, -4.0);
  for (int k = 0; k < samples; ++k) {
    const double d = samples == 1 ? 0.0 : dmax * k / (samples - 1);
    const auto rep = verify_positivity(build_cost_function(sol, d));
    rows.push_back({d, rep.min_K0, rep.pass});
  }
  return rows;
}

double tail_ratio(const CostFunctionData& data) {
  const auto& grid = data.sol.f0.grid;
  const auto& f = data.sol.f0.values;
  double r = 0.0;
  for (int i = 0; i < grid.size(); ++i)
    if (grid.node(i) >= data.ell_bar + 2.0) r = std::max(r, f[i] / f[0]);
  return r;
}

void write_cost_csv(std::ostream& os, const CostFunctionData& data) {
  const auto old = os.precision(17);
  os << "t,F0,K0\n";
  const auto& grid = data.sol.f0.grid;
  for (int i = 0; i < grid.size(); ++i)
    os << grid.node(i) << ',' << data.F0[i] << ',' << data.K0[i] << '\n';
  os.precision(old);
}

nlohmann::json cost_report_json(const CostFunctionData& data, const PositivityReport& pos,
                                const BoundReport& bound) {
  return {{"b", data.sol.b},
          {"ell", data.sol.ell},
          {"d_ell", data.d_ell},
          {"ell_bar", data.ell_bar},
          {"min_K0", pos.min_K0},
          {"argmin", pos.t_argmin},
          {"positivity_pass", pos.pass},
          {"max_F0_ratio_inside", bound.max_ratio_inside},
          {"F0_bound_pass", bound.pass_inside},
          {"C_complement", bound.C_complement},
          {"F0_at_ell", data.F0_forward.back()},
          {"representation_gap", data.representation_gap},
          {"tail_ratio", tail_ratio(data)}};
}

} // namespace cornergl

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cornergl/effective1d.hpp"
#include "cornergl/error.hpp"
#include "frozen.hpp"
#include "oned_oracle.hpp"

#include <cmath>
#include <map>
#include <sstream>

using namespace cornergl;

namespace {

const Effective1DSolution& solution(double b) {
  static std::map<double, Effective1DSolution> cache;
  auto it = cache.find(b);
  if (it == cache.end()) it = cache.emplace(b, minimize_1d(10.0, b, Grid1D(10.0, 2048))).first;
  return it->second;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("grid invariants") {
  const Grid1D g(10.0, 2048);
  CHECK(g.node(0) == 0.0);
  CHECK(g.node(2047) == 10.0);
  CHECK(g.spacing() == doctest::Approx(10.0 / 2047));
  CHECK_THROWS_AS(Grid1D(10.0, 32), Error);
  const auto w = g.weights();
  double s = 0.0;
  for (double x : w) s += x;
  CHECK(s == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("energy_1d closed forms") {
  const Grid1D g(1.0, 4097);
  CHECK(energy_1d(Profile1D(g, std::vector<double>(g.size(), 0.0)), -0.3, 1.5) == 0.0);
  // f = 1, alpha = 0, b = 1, ell = 1: int t^2 - 1/2 = -1/6 (trapezoid error h^2/6).
  const double e = energy_1d(Profile1D(g, std::vector<double>(g.size(), 1.0)), 0.0, 1.0);
  CHECK(std::abs(e + 1.0 / 6.0) < 1e-7);
}

TEST_CASE("solve_profile") {
  const Grid1D g(10.0, 2048);
  SUBCASE("below the linear threshold the zero branch is returned") {
    // alpha = 0: lowest Neumann eigenvalue of -d^2 + t^2 on the half-line is 1 > 1/b.
    const auto z = solve_profile(0.0, 1.5, g);
    CHECK(z.trivial);
    CHECK(z.profile.max_value() == 0.0);
    CHECK(!zero_profile_unstable(0.0, 1.5, g));
  }
  SUBCASE("same-grid agreement with the oracle") {
    const auto p = solve_profile(-0.5, 1.5, g);
    CHECK(!p.trivial);
    CHECK(rel(p.energy, frozen::kProfileEnergyN2048) < 1e-9);
  }
  SUBCASE("two-grid extrapolation matches the dense oracle") {
    const auto c = solve_profile(-0.5, 1.5, g);
    const auto f = solve_profile(-0.5, 1.5, Grid1D(10.0, 4095));
    CHECK(rel((4 * f.energy - c.energy) / 3, frozen::kProfileEnergyRichardson) < 1e-6);
  }
  SUBCASE("profile bounds") {
    const auto p = solve_profile(-0.8, 1.3, g);
    for (double v : p.profile.values) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
  SUBCASE("phase moment at the optimal alpha") {
    const auto& s = solution(1.5);
    const auto p = solve_profile(s.alpha0, 1.5, g);
    // Single-grid moment carries the O(h^2) shift of the discrete alpha.
    CHECK(std::abs(phase_moment(p.profile, s.alpha0)) < 1e-6);
    CHECK(std::abs(s.alpha_moment) < 1e-8);
  }
}

TEST_CASE("minimize_1d against the frozen oracle") {
  for (const auto& row : frozen::kEll10) {
    CAPTURE(row.b);
    const auto& s = solution(row.b);
    CHECK(!s.degenerate);
    CHECK(std::abs(s.alpha0 - row.alpha0) < 1e-8);
    CHECK(rel(s.e1d, row.e1d) < 1e-6);
    CHECK(std::abs(s.f0_at_0 - row.f0_at_0) < 1e-7);
    CHECK(rel(s.ecorr, row.ecorr) < 1e-5);
    CHECK(s.e1d < 0.0);
    CHECK(s.alpha0 < 0.0);
    CHECK(s.energy_identity <= 1e-6 * std::abs(s.e1d));
    CHECK(std::abs(s.alpha_moment) <= 1e-8);
    CHECK(s.neumann_left <= 1e-6);
    CHECK(s.neumann_right <= 1e-6);
    CHECK(s.t_max > 0.0);
    CHECK(s.t_max <= std::abs(s.alpha0) + 1.0 / std::sqrt(row.b));
    CHECK(s.moment_sign_changes == 1);
  }
}

TEST_CASE("nested solve equals joint minimisation over (f, alpha)") {
  // Oracle-level equivalence, then the library against an extrapolated joint descent.
  CHECK(rel(frozen::kJointEnergy4097, frozen::kNestedEnergy4097) < 1e-6);
  const auto j1 = oracle::joint_descent(10, 1.5, 1025);
  const auto j2 = oracle::joint_descent(10, 1.5, 2049);
  CHECK(rel(solution(1.5).e1d, (4 * j2.energy - j1.energy) / 3) < 1e-6);
}

TEST_CASE("degenerate minimiser beyond 1/Theta0") {
  const auto s = minimize_1d(10.0, 1.72, Grid1D(10.0, 2048));
  CHECK(s.degenerate);
  CHECK(std::abs(s.e1d) < 1e-6);
  CHECK_THROWS_AS(compute_ecorr(s), Error);
}

TEST_CASE("ell insensitivity") {
  const auto s14 = minimize_1d(14.0, 1.5, Grid1D::with_spacing(14.0, kDefaultSpacing1D));
  CHECK(std::abs(s14.e1d - solution(1.5).e1d) < 1e-8);
  const auto s6 = minimize_1d(6.0, 1.5);
  CHECK(rel(s6.e1d, frozen::kEll6B15.e1d) < 1e-6);
  CHECK(std::abs(s6.alpha0 - frozen::kEll6B15.alpha0) < 1e-8);
}

TEST_CASE("grid convergence is second order") {
  const auto a = minimize_1d(10.0, 1.5, Grid1D(10.0, 257));
  const auto b = minimize_1d(10.0, 1.5, Grid1D(10.0, 513));
  const double ref = frozen::kEll10[2].e1d;
  // The extrapolated values converge at least at second order.
  const double ratio = std::abs(a.e1d - ref) / std::abs(b.e1d - ref);
  CHECK(ratio > 3.5);
}

TEST_CASE("E_corr forms and sign") {
  for (const auto& row : frozen::kEll10) {
    const auto& s = solution(row.b);
    const auto f = compute_ecorr(s);
    CHECK(f.rel_discrepancy <= 1e-4);
    CHECK(f.integral > 0.0);
    CHECK(f.algebraic == doctest::Approx(s.f0_at_0 * s.f0_at_0 / 3 - s.alpha0 * s.e1d).epsilon(1e-12));
  }
}

TEST_CASE("decay of the profile") {
  const auto& s = solution(1.5);
  const auto& f = s.f0;
  const auto fp = f.derivative();
  // Monotone beyond t0.
  for (int i = 1; i < f.grid.size(); ++i)
    if (f.grid.node(i - 1) > s.t_max + f.grid.spacing()) CHECK(f.values[i] <= f.values[i - 1] + 1e-14);
  // Gaussian envelope fitted on [t0, t0 + 1].
  double C = 0.0;
  for (int i = 0; i < f.grid.size(); ++i) {
    const double t = f.grid.node(i);
    if (t >= s.t_max && t <= s.t_max + 1.0) C = std::max(C, f.values[i] / std::exp(-0.5 * std::pow(t + s.alpha0, 2)));
  }
  double Cd = 0.0;
  for (int i = 0; i < f.grid.size(); ++i) {
    const double t = f.grid.node(i);
    Cd = std::max(Cd, std::abs(fp[i]) / std::exp(-0.25 * t * t));
  }
  CHECK(C > 0.0);
  for (int i = 0; i < f.grid.size(); ++i) {
    const double t = f.grid.node(i);
    if (t >= s.t_max + 2.0) CHECK(f.values[i] <= C * std::exp(-0.5 * std::pow(t + s.alpha0, 2)) + 1e-15);
  }
  CHECK(std::isfinite(Cd));
  CHECK(Cd < 10.0);
}

TEST_CASE("json round trip and csv") {
  const auto& s = solution(1.3);
  const auto j = to_json(s);
  const auto back = solution_from_json(j);
  CHECK(back.alpha0 == s.alpha0);
  CHECK(back.e1d == s.e1d);
  CHECK(back.ecorr == s.ecorr);
  CHECK(back.f0.values == s.f0.values);
  std::ostringstream os;
  write_profile_csv(os, s);
  CHECK(os.str().rfind("t,", 0) == 0);
}

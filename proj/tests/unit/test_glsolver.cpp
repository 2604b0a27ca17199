#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cornergl/error.hpp"
#include "cornergl/glsolver.hpp"

#include <cmath>
#include <random>
#include <sstream>

using namespace cornergl;

namespace {

const Effective1DSolution& sol6() {
  static const auto s = minimize_1d(6.0, 1.5);
  return s;
}

std::vector<cplx> random_field(const Mesh& m, const Effective1DSolution& sol, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 0.5);
  auto psi = patch_extension(m, sol);
  for (int i = 0; i < m.size(); ++i)
    if (!m.dirichlet[i]) psi[i] += cplx(n(rng), n(rng));
  return psi;
}

} // namespace

TEST_CASE("magnetic potential") {
  CHECK(magnetic_potential({0, 0}).x == 0.0);
  CHECK(magnetic_potential({0, 0}).y == 0.0);
  const Vec2 a = magnetic_potential({1, 0});
  CHECK(a.x == 0.0);
  CHECK(a.y == 0.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  const double e = 1e-3;
  for (int k = 0; k < 10; ++k) {
    const Vec2 p{u(rng), u(rng)};
    const double curl = (magnetic_potential(p + Vec2{e, 0}).y - magnetic_potential(p - Vec2{e, 0}).y) / (2 * e) -
                        (magnetic_potential(p + Vec2{0, e}).x - magnetic_potential(p - Vec2{0, e}).x) / (2 * e);
    CHECK(std::abs(curl - 1.0) < 1e-10);
    const Vec2 f = magnetic_potential(p);
    CHECK(std::abs(f.x * p.x + f.y * p.y) < 1e-12); // radial component
  }
}

TEST_CASE("boundary data") {
  const auto& sol = sol6();
  const auto g = build_wedge(M_PI - 0.2, 8.0, 6.0);
  const cplx at_b = boundary_data(g, sol, g.B);
  CHECK(std::abs(at_b - std::polar(sol.f0_at_0, -sol.alpha0 * 8.0)) < 1e-12);

  const auto sol10 = minimize_1d(10.0, 1.5);
  const auto g10 = build_wedge(M_PI - 0.2, 12.0, 10.0);
  for (double x : {0.5, 0.25, 0.0})
    CHECK(std::abs(boundary_data(g10, sol10, g10.D + x * (g10.E - g10.D))) <= 1e-10);

  // Phase mismatch at D between the two patch formulas.
  const auto pp = polar_to_patch(g, to_polar(g.D), Patch::Plus);
  const auto pm = polar_to_patch(g, to_polar(g.D), Patch::Minus);
  const double jump = std::abs(std::arg(boundary_data(sol, pp) / boundary_data(sol, pm)));
  CHECK(jump <= std::abs(pp.s - pm.s) * (std::abs(sol.alpha0) + g.ell / 2) + 1e-12);
  CHECK_THROWS_AS(boundary_data(g, sol, {0.0, -1.0}), Error);
}

TEST_CASE("energy of simple fields") {
  const auto g = build_wedge(M_PI, 4.0, 6.0);
  const auto m = generate_mesh(g, 0.5);
  ComplexField zero{&m, std::vector<cplx>(m.size(), 0.0)};
  GLDiscretisation::Breakdown br;
  CHECK(gl_energy(zero, 1.5, &br) == 0.0);
  CHECK(br.kinetic == 0.0);
  const auto grad = gl_gradient(zero, 1.5);
  for (const auto& z : grad.values) CHECK(z == cplx(0.0));
}

TEST_CASE("strip extension reproduces 2 L E1D at second order") {
  const auto& sol = sol6();
  const auto g = build_wedge(M_PI, 4.0, 6.0);
  std::vector<double> err;
  for (double h : {0.5, 0.25, 0.125}) {
    const auto m = generate_mesh(g, h);
    const double e = gl_energy({&m, patch_extension(m, sol)}, 1.5);
    err.push_back(e - 2.0 * 4.0 * sol.e1d);
  }
  CHECK(std::abs(err[2]) < 2e-3);
  const double order = std::log2(err[0] / err[1]);
  const double order2 = std::log2(err[1] / err[2]);
  CHECK(order == doctest::Approx(2.0).epsilon(0.1));
  CHECK(order2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("gradient matches central differences") {
  const auto& sol = sol6();
  const auto g = build_wedge(M_PI - 0.2, 8.0, 6.0);
  const auto m = generate_mesh(g, 0.5);
  const GLDiscretisation disc(m, 1.5);
  std::mt19937_64 rng(20);
  const auto psi = random_field(m, sol, rng);
  const auto grad = disc.gradient(psi);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    std::vector<cplx> v(m.size(), 0.0);
    for (int i = 0; i < m.size(); ++i)
      if (!m.dirichlet[i]) v[i] = cplx(n(rng), n(rng));
    const double eps = 1e-5;
    auto shifted = [&](double s) {
      auto p = psi;
      for (int i = 0; i < m.size(); ++i) p[i] += s * v[i];
      return disc.energy(p).total();
    };
    const double fd = (shifted(eps) - shifted(-eps)) / (2 * eps);
    double an = 0.0;
    for (int i = 0; i < m.size(); ++i) an += (std::conj(grad[i]) * v[i]).real();
    CHECK(std::abs(fd - an) <= 1e-6 * std::abs(an));
  }
  for (int i = 0; i < m.size(); ++i)
    if (m.dirichlet[i]) CHECK(grad[i] == cplx(0.0));
}

TEST_CASE("gauge sanity") {
  const auto& sol = sol6();
  const auto g = build_wedge(M_PI + 0.2, 8.0, 6.0);
  const auto m = generate_mesh(g, 0.5);
  std::mt19937_64 rng(5);
  auto psi = random_field(m, sol, rng);
  const double e0 = gl_energy({&m, psi}, 1.5);
  for (auto& z : psi) z *= std::polar(1.0, 0.731);
  CHECK(std::abs(gl_energy({&m, psi}, 1.5) - e0) <= 1e-12 * std::abs(e0));
}

TEST_CASE("minimisation on a short strip") {
  const auto& sol = sol6();
  const auto g = build_wedge(M_PI, 4.0, 6.0);
  const double h = 0.25;
  const auto m = generate_mesh(g, h);
  const auto r = minimize_gl(g, m, sol, 1.5);
  CHECK(r.result.converged);
  CHECK(r.result.grad_norm <= r.result.tolerance);
  CHECK(r.result.e_gamma <= r.result.e_initial);
  CHECK(std::abs(r.result.e_corner) < 2e-2);
  CHECK(r.result.breakdown.total() == doctest::Approx(r.result.e_gamma));
  double mx = 0.0;
  for (int i = 0; i < m.size(); ++i) {
    mx = std::max(mx, std::abs(r.field.values[i]));
    if (m.dirichlet[i]) CHECK(r.field.values[i] == boundary_data(sol, m.coords[i]));
  }
  CHECK(mx <= 1.0 + 5 * h);
  const auto j = to_json(r.result);
  CHECK(j.at("e_corner").get<double>() == r.result.e_corner);

  std::stringstream io;
  write_field(io, r.field);
  const auto back = read_field(io, m);
  CHECK(back.values == r.field.values);
}

TEST_CASE("input validation") {
  const auto& sol = sol6();
  const auto g = build_wedge(M_PI, 4.0, 5.0);
  const auto m = generate_mesh(g, 0.5);
  CHECK_THROWS_AS(minimize_gl(g, m, sol, 1.5), Error);
  const auto g6 = build_wedge(M_PI, 4.0, 6.0);
  const auto m6 = generate_mesh(g6, 0.5);
  CHECK_THROWS_AS(minimize_gl_from(g6, m6, sol, 1.5, std::vector<cplx>(3)), Error);
  std::stringstream bad("0 1.0\n");
  CHECK_THROWS_AS(read_field(bad, m6), Error);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cornergl/error.hpp"
#include "cornergl/geometry.hpp"
#include "cornergl/mesh.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace cornergl;

namespace {

// Intersection of the lines p + s u and q + t v.
Vec2 intersect(Vec2 p, Vec2 u, Vec2 q, Vec2 v) {
  const double det = u.x * (-v.y) - u.y * (-v.x);
  const Vec2 r = q - p;
  const double s = (r.x * (-v.y) - r.y * (-v.x)) / det;
  return p + s * u;
}

double dist(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Distance from p to the full line through a and b.
double line_dist(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a, w = p - a;
  return std::abs(d.x * w.y - d.y * w.x) / std::hypot(d.x, d.y);
}

double seg_dist(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 d = b - a, w = p - a;
  const double s = std::clamp((w.x * d.x + w.y * d.y) / (d.x * d.x + d.y * d.y), 0.0, 1.0);
  return dist(p, a + s * d);
}

Vec2 random_interior(const WedgeGeometry& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux(-g.L, g.L), uy(-g.L, g.L);
  for (;;) {
    const Vec2 p{ux(rng), uy(rng)};
    if (contains(g, p, -1e-6)) return p;
  }
}

} // namespace

TEST_CASE("flat angle is a rectangle") {
  const auto g = build_wedge(M_PI, 8.0, 4.0);
  CHECK(dist(g.D, {0.0, 4.0}) < 1e-14);
  CHECK(dist(g.A, {-8.0, 0.0}) < 1e-14);
  CHECK(dist(g.C, {-8.0, 4.0}) < 1e-14);
  CHECK(dist(g.E, {8.0, 4.0}) < 1e-14);
  CHECK(polygon_area(g) == doctest::Approx(64.0));
}

TEST_CASE("inner vertex from a direct line intersection") {
  for (double beta : {M_PI - 0.2, M_PI + 0.2, 2.0}) {
    const auto g = build_wedge(beta, 8.0, 4.0);
    // Inner offset lines: y = ell and the offset of VA along its inward normal.
    const Vec2 nA{std::sin(beta), -std::cos(beta)};
    const Vec2 D = intersect({0.0, 4.0}, {1.0, 0.0}, 4.0 * nA, {std::cos(beta), std::sin(beta)});
    CHECK(dist(D, g.D) < 1e-12);
    CHECK(std::atan2(g.D.y, g.D.x) == doctest::Approx(beta / 2));
  }
  const auto g = build_wedge(M_PI - 0.2, 8.0, 4.0);
  CHECK(std::hypot(g.D.x, g.D.y) == doctest::Approx(4.0 / std::cos(0.1)).epsilon(1e-14));
}

TEST_CASE("invalid geometries") {
  CHECK_THROWS_AS(build_wedge(M_PI / 6, 8.0, 4.0), Error);
  try {
    build_wedge(M_PI / 6, 8.0, 4.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidGeometry);
  }
  CHECK_THROWS_AS(build_wedge(0.0, 8.0, 4.0), Error);
  CHECK_THROWS_AS(build_wedge(M_PI, 8.0, 4.0, M_PI), Error);
  CHECK_NOTHROW(build_wedge(0.1, Side::Plus, 8.0, 4.0, 0.2));
}

TEST_CASE("transition angles") {
  const auto g = build_wedge(M_PI - 0.2, 8.0, 4.0, 0.3);
  CHECK(g.theta_lt + g.theta_gt == doctest::Approx(2 * g.theta_bis));
  CHECK(g.delta == doctest::Approx(0.2));
  CHECK(g.side == Side::Minus);
  CHECK(build_wedge(0.2, Side::Plus, 8.0, 4.0).beta == doctest::Approx(M_PI + 0.2));
}

TEST_CASE("coordinate maps") {
  for (double beta : {M_PI - 0.2, M_PI + 0.2}) {
    const auto g = build_wedge(beta, 8.0, 4.0);
    SUBCASE("vertex") {
      const auto m = map_coordinates(g, g.V);
      CHECK(m.patch.s == 0.0);
      CHECK(m.patch.t == 0.0);
    }
    SUBCASE("bisectrix continuity of t") {
      for (double r : {0.5, 1.7, 3.9}) {
        const Vec2 p = r * Vec2{std::cos(beta / 2), std::sin(beta / 2)};
        const auto tp = polar_to_patch(g, to_polar(p), Patch::Plus).t;
        const auto tm = polar_to_patch(g, to_polar(p), Patch::Minus).t;
        CHECK(std::abs(tp - tm) < 1e-12);
        CHECK(map_coordinates(g, p).patch.patch == Patch::Plus);
      }
    }
    SUBCASE("round trips and distance to the own side line") {
      std::mt19937_64 rng(7);
      for (int k = 0; k < 200; ++k) {
        const Vec2 p = random_interior(g, rng);
        const auto m = map_coordinates(g, p);
        const auto back = patch_to_cartesian(g, polar_to_patch(g, m.polar, m.patch.patch));
        CHECK(dist(back, p) < 1e-12);
        const auto c = polar_to_patch(g, m.polar, m.patch.patch);
        CHECK(std::abs(c.s - m.patch.s) < 1e-12);
        CHECK(std::abs(c.t - m.patch.t) < 1e-12);
        const Vec2 other = m.patch.patch == Patch::Plus ? g.B : g.A;
        CHECK(std::abs(m.patch.t - line_dist(p, g.V, other)) < 1e-12);
      }
    }
    SUBCASE("patch maps are isometries") {
      std::mt19937_64 rng(11);
      const double e = 1e-6;
      for (int k = 0; k < 50; ++k) {
        const Vec2 p = random_interior(g, rng);
        const auto patch = map_coordinates(g, p).patch.patch;
        auto at = [&](Vec2 q) { return polar_to_patch(g, to_polar(q), patch); };
        const auto px = at(p + Vec2{e, 0}), mx = at(p - Vec2{e, 0});
        const auto py = at(p + Vec2{0, e}), my = at(p - Vec2{0, e});
        const double sx = (px.s - mx.s) / (2 * e), sy = (py.s - my.s) / (2 * e);
        const double tx = (px.t - mx.t) / (2 * e), ty = (py.t - my.t) / (2 * e);
        CHECK(std::hypot(sx, sy) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::hypot(tx, ty) == doctest::Approx(1.0).epsilon(1e-8));
        CHECK(std::abs(sx * tx + sy * ty) < 1e-8);
      }
    }
    SUBCASE("outside points") { CHECK_THROWS_AS(map_coordinates(g, {0.0, -1.0}), Error); }
  }
}

TEST_CASE("area identity") {
  for (double delta : {0.0, 0.1, 0.25}) {
    for (Side side : {Side::Minus, Side::Plus}) {
      const auto g = build_wedge(delta, side, 8.0, 6.0);
      const double sign = side == Side::Minus ? -1.0 : 1.0;
      CHECK(wedge_area(g) == doctest::Approx(96.0 + sign * 36.0 * std::tan(delta / 2)).epsilon(1e-14));
      CHECK(polygon_area(g) == doctest::Approx(wedge_area(g)).epsilon(1e-13));
    }
  }
}

TEST_CASE("structured strip mesh") {
  const auto g = build_wedge(M_PI, 8.0, 4.0);
  const auto m = generate_mesh(g, 0.5);
  CHECK(m.size() == (2 * 16 + 1) * (8 + 1));
  CHECK(std::abs(m.total_area() - polygon_area(g)) <= 1e-10 * polygon_area(g));
  CHECK(m.min_angle_deg() >= 20.0);
  CHECK_THROWS_AS(generate_mesh(g, 1.0), Error);
}

TEST_CASE("mesh conformity, areas and boundary tags") {
  for (double beta : {M_PI - 0.2, M_PI + 0.2, M_PI - 0.4}) {
    const auto g = build_wedge(beta, 8.0, 6.0);
    const auto m = generate_mesh(g, 0.25);
    CHECK(std::abs(m.total_area() - polygon_area(g)) <= 1e-10 * polygon_area(g));
    for (int k = 0; k < static_cast<int>(m.triangles.size()); ++k) CHECK(m.triangle_area(k) > 0.0);

    // Every edge is shared by at most two triangles; boundary edges by one.
    std::map<std::pair<int, int>, int> count;
    for (const auto& t : m.triangles)
      for (int c = 0; c < 3; ++c) {
        const int a = t[c], b = t[(c + 1) % 3];
        ++count[{std::min(a, b), std::max(a, b)}];
      }
    std::set<std::pair<int, int>> boundary;
    for (const auto& [e, n] : count) {
      CHECK(n <= 2);
      if (n == 1) boundary.insert(e);
    }

    // Independent classification of boundary edges by the polygon side they lie on.
    auto on = [&](Vec2 p, Vec2 a, Vec2 b) { return seg_dist(p, a, b) < 1e-9; };
    int n_out = 0, n_in = 0, n_bd = 0;
    for (const auto& [a, b] : boundary) {
      const Vec2 p = m.nodes[a], q = m.nodes[b];
      const Vec2 mid = 0.5 * (p + q);
      if (on(mid, g.V, g.B) || on(mid, g.V, g.A)) ++n_out;
      else if (on(mid, g.C, g.D) || on(mid, g.D, g.E)) ++n_in;
      else if (on(mid, g.A, g.C) || on(mid, g.E, g.B)) ++n_bd;
      else FAIL("boundary edge on no polygon side");
    }
    CHECK(m.count(EdgeTag::Out) == n_out);
    CHECK(m.count(EdgeTag::In) == n_in);
    CHECK(m.count(EdgeTag::Bd) == n_bd);
    CHECK(n_out + n_in + n_bd == static_cast<int>(boundary.size()));

    // Tagged edges are real mesh edges; bisectrix edges are interior and lie on the bisectrix.
    for (const auto& e : m.edges) {
      const auto key = std::make_pair(std::min(e.a, e.b), std::max(e.a, e.b));
      REQUIRE(count.count(key) == 1);
      if (e.tag == EdgeTag::Bisectrix) {
        CHECK(count[key] == 2);
        CHECK(on(m.nodes[e.a], g.V, g.D));
        CHECK(on(m.nodes[e.b], g.V, g.D));
      } else {
        CHECK(count[key] == 1);
      }
    }
    // Dirichlet nodes are exactly the nodes on in/bd edges.
    for (int i = 0; i < m.size(); ++i) {
      const Vec2 p = m.nodes[i];
      const bool expect = on(p, g.C, g.D) || on(p, g.D, g.E) || on(p, g.A, g.C) || on(p, g.E, g.B);
      CHECK(m.dirichlet[i] == expect);
    }
    // Generated patch coordinates agree with the coordinate map.
    for (int i = 0; i < m.size(); ++i) {
      const auto c = polar_to_patch(g, to_polar(m.nodes[i]), m.coords[i].patch);
      CHECK(std::abs(c.s - m.coords[i].s) < 1e-9);
      CHECK(std::abs(c.t - m.coords[i].t) < 1e-9);
    }
  }
}

TEST_CASE("mesh export") {
  const auto g = build_wedge(M_PI - 0.2, 8.0, 4.0);
  const auto m = generate_mesh(g, 0.5);
  std::ostringstream txt, vtk;
  write_mesh_text(txt, m);
  write_mesh_vtk(vtk, m);
  CHECK(txt.str().rfind("nodes " + std::to_string(m.size()), 0) == 0);
  CHECK(vtk.str().find("CELL_TYPES " + std::to_string(m.triangles.size())) != std::string::npos);
}

#include "cornergl/geometry.hpp"

#include "cornergl/error.hpp"

#include <cmath>
#include <sstream>

namespace cornergl {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorKind::InvalidGeometry, "geometry", msg);
}

} // namespace

std::string to_string(Side s) { return s == Side::Minus ? "minus" : "plus"; }

Side side_from_string(const std::string& s) {
  if (s == "minus") return Side::Minus;
  if (s == "plus") return Side::Plus;
  throw Error(ErrorKind::InvalidParams, "geometry", "side must be 'minus' or 'plus', got '" + s + "'");
}

WedgeGeometry build_wedge(double beta, double L, double ell, double gamma) {
  if (!(beta > 0.0 && beta < 2.0 * M_PI)) invalid("opening angle must lie in (0, 2 pi)");
  if (!(L > 0.0 && ell > 0.0)) invalid("L and ell must be positive");
  const double tan_half = std::tan(0.5 * beta);
  if (ell > L * std::abs(tan_half) * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "ell = " << ell << " exceeds L |tan(beta/2)| = " << L * std::abs(tan_half);
    invalid(os.str());
  }
  if (gamma < 0.0 || gamma >= 0.5 * beta) invalid("gamma must lie in [0, beta/2)");

  WedgeGeometry g;
  g.beta = beta;
  g.delta = std::abs(M_PI - beta);
  g.side = beta <= M_PI ? Side::Minus : Side::Plus;
  g.L = L;
  g.ell = ell;
  g.gamma = gamma;
  g.theta_bis = 0.5 * beta;
  g.theta_lt = 0.5 * (beta - gamma);
  g.theta_gt = 0.5 * (beta + gamma);

  const double ds = g.signed_deficit();
  g.V = {0.0, 0.0};
  g.B = {L, 0.0};
  g.E = {L, ell};
  g.A = {L * std::cos(beta), L * std::sin(beta)};
  // Inward normal of VA is (sin beta, -cos beta).
  g.C = g.A + ell * Vec2{std::sin(beta), -std::cos(beta)};
  g.D = {ell * std::tan(0.5 * ds), ell};
  return g;
}

WedgeGeometry build_wedge(double delta, Side side, double L, double ell, double gamma) {
  if (delta < 0.0) invalid("delta must be nonnegative");
  return build_wedge(side == Side::Minus ? M_PI - delta : M_PI + delta, L, ell, gamma);
}

PolarCoords to_polar(Vec2 p) {
  PolarCoords q;
  q.rho = std::hypot(p.x, p.y);
  if (q.rho == 0.0) return q;
  q.theta = std::atan2(p.y, p.x);
  if (q.theta < 0.0) q.theta += 2.0 * M_PI;
  return q;
}

PatchCoords polar_to_patch(const WedgeGeometry& g, PolarCoords q, Patch patch) {
  const double phi = patch == Patch::Plus ? q.theta : q.theta + g.signed_deficit();
  return {patch, q.rho * std::cos(phi), q.rho * std::sin(phi)};
}

Vec2 patch_to_cartesian(const WedgeGeometry& g, PatchCoords c) {
  if (c.patch == Patch::Plus) return {c.s, c.t};
  const double ds = g.signed_deficit();
  // Inverse rotation by -ds.
  return {c.s * std::cos(ds) + c.t * std::sin(ds), -c.s * std::sin(ds) + c.t * std::cos(ds)};
}

namespace {

Patch patch_of(const WedgeGeometry& g, Vec2 p) {
  const double ux = std::cos(g.theta_bis), uy = std::sin(g.theta_bis);
  const double cross = ux * p.y - uy * p.x;
  return cross <= 1e-14 * (g.L + g.ell) ? Patch::Plus : Patch::Minus;
}

PatchCoords frame_coords(const WedgeGeometry& g, Vec2 p, Patch patch) {
  if (patch == Patch::Plus) return {patch, p.x, p.y};
  const double ds = g.signed_deficit();
  return {patch, p.x * std::cos(ds) - p.y * std::sin(ds), p.x * std::sin(ds) + p.y * std::cos(ds)};
}

bool in_patch(const WedgeGeometry& g, PatchCoords c, double tol) {
  const double k = std::tan(0.5 * g.signed_deficit());
  if (c.t < -tol || c.t > g.ell + tol) return false;
  if (c.patch == Patch::Plus) return c.s <= g.L + tol && c.s >= c.t * k - tol;
  return c.s >= -g.L - tol && c.s <= -c.t * k + tol;
}

} // namespace

bool contains(const WedgeGeometry& g, Vec2 p, double tol) {
  const double abs_tol = tol * g.ell;
  const Patch patch = patch_of(g, p);
  return in_patch(g, frame_coords(g, p, patch), abs_tol);
}

MappedPoint map_coordinates(const WedgeGeometry& g, Vec2 p) {
  const Patch patch = patch_of(g, p);
  const auto c = frame_coords(g, p, patch);
  if (!in_patch(g, c, 1e-9 * g.ell)) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ") lies outside the wedge";
    throw Error(ErrorKind::OutsideDomain, "geometry", os.str());
  }
  return {c, to_polar(p)};
}

double wedge_area(const WedgeGeometry& g) {
  return 2.0 * g.L * g.ell - g.ell * g.ell * std::tan(0.5 * g.signed_deficit());
}

double polygon_area(const WedgeGeometry& g) {
  const auto p = g.polygon();
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const auto& u = p[i];
    const auto& v = p[(i + 1) % p.size()];
    a += u.x * v.y - v.x * u.y;
  }
  return 0.5 * a;
}

nlohmann::json to_json(const WedgeGeometry& g) {
  auto pt = [](Vec2 v) { return nlohmann::json::array({v.x, v.y}); };
  return {{"beta", g.beta},   {"delta", g.delta},         {"side", to_string(g.side)},
          {"L", g.L},         {"ell", g.ell},             {"gamma", g.gamma},
          {"V", pt(g.V)},     {"B", pt(g.B)},             {"E", pt(g.E)},
          {"D", pt(g.D)},     {"C", pt(g.C)},             {"A", pt(g.A)},
          {"theta_bis", g.theta_bis}, {"theta_lt", g.theta_lt}, {"theta_gt", g.theta_gt}};
}

} // namespace cornergl

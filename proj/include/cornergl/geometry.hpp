#pragma once

// Wedge Gamma_beta(L, ell): the layer of width ell along two outer sides of
// length L meeting at the vertex V with opening angle beta.
//
//   V = (0,0), B = (L,0), A = L (cos beta, sin beta)
//   E = B + (0, ell), C = A + ell n_A, D on the bisectrix at ell / sin(beta/2)
//
// Polar angle theta is measured counterclockwise from VB. Points with
// theta <= beta/2 belong to the plus patch (s, t) = (x, y); the others to the
// minus patch s = rho cos(theta + ds), t = rho sin(theta + ds) with the
// signed deficit ds = pi - beta. Both maps are rotations, so the magnetic
// potential keeps the form (-t, s)/2 in either frame.

#include "json.hpp"

#include <array>
#include <string>

namespace cornergl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double c, Vec2 a) { return {c * a.x, c * a.y}; }

/// beta = pi - delta (Minus) or pi + delta (Plus).
enum class Side { Minus, Plus };
enum class Patch { Plus, Minus };

std::string to_string(Side s);
Side side_from_string(const std::string& s);

struct WedgeGeometry {
  double beta = 0.0;
  double delta = 0.0; ///< |pi - beta|
  Side side = Side::Minus;
  double L = 0.0;
  double ell = 0.0;
  double gamma = 0.0;
  Vec2 V, B, E, D, C, A;
  double theta_bis = 0.0;
  double theta_lt = 0.0; ///< (beta - gamma) / 2
  double theta_gt = 0.0; ///< (beta + gamma) / 2

  double signed_deficit() const { return M_PI - beta; }
  /// Polygon vertices in counterclockwise order V, B, E, D, C, A.
  std::array<Vec2, 6> polygon() const { return {V, B, E, D, C, A}; }
};

/// Throws InvalidGeometry unless 0 < beta < 2 pi, ell <= L |tan(beta/2)|,
/// 0 < gamma < beta / 2 (gamma = 0 is accepted and means "no transition").
WedgeGeometry build_wedge(double beta, double L, double ell, double gamma = 0.0);
WedgeGeometry build_wedge(double delta, Side side, double L, double ell, double gamma = 0.0);

struct PatchCoords {
  Patch patch = Patch::Plus;
  double s = 0.0;
  double t = 0.0;
};

struct PolarCoords {
  double rho = 0.0;
  double theta = 0.0; ///< in [0, 2 pi)
};

struct MappedPoint {
  PatchCoords patch;
  PolarCoords polar;
};

/// Patch by side of the bisectrix (ties go to the plus patch). Throws
/// OutsideDomain for points outside the closed polygon (tolerance 1e-9 ell).
MappedPoint map_coordinates(const WedgeGeometry& g, Vec2 p);

/// Tubular coordinates of a polar point in the requested patch frame.
PatchCoords polar_to_patch(const WedgeGeometry& g, PolarCoords q, Patch patch);
Vec2 patch_to_cartesian(const WedgeGeometry& g, PatchCoords c);
PolarCoords to_polar(Vec2 p);

bool contains(const WedgeGeometry& g, Vec2 p, double tol = 1e-9);

/// Closed form 2 L ell - ell^2 tan(ds / 2).
double wedge_area(const WedgeGeometry& g);
/// Shoelace area of the vertex polygon.
double polygon_area(const WedgeGeometry& g);

nlohmann::json to_json(const WedgeGeometry& g);

} // namespace cornergl

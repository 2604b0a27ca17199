#pragma once

// Structured triangulation of a wedge: one mapped quad grid per patch in
// tubular coordinates, rows at t_j = j ell / Nt, columns evenly spaced
// between the bisectrix and the tangential cut, each quad split along a
// diagonal. The two grids share their bisectrix column node for node.

#include "cornergl/geometry.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace cornergl {

enum class EdgeTag { Out, In, Bd, Bisectrix };

std::string to_string(EdgeTag tag);

struct TaggedEdge {
  int a;
  int b;
  EdgeTag tag;
};

struct Mesh {
  std::vector<Vec2> nodes;
  std::vector<std::array<int, 3>> triangles;
  /// Boundary edges (Out, In, Bd) and the internal bisectrix edges.
  std::vector<TaggedEdge> edges;
  /// Patch frame each node was generated in; bisectrix nodes are Plus.
  std::vector<PatchCoords> coords;
  std::vector<bool> dirichlet; ///< node lies on an In or Bd edge
  double h = 0.0;
  int ns = 0; ///< quads per row in each patch
  int nt = 0; ///< quad rows

  int size() const { return static_cast<int>(nodes.size()); }
  double triangle_area(int k) const;
  double total_area() const;
  /// Smallest interior angle over all triangles, in degrees.
  double min_angle_deg() const;
  int count(EdgeTag tag) const;
};

/// Requires h <= ell / 8; throws MeshFailure on bad input or poor quality.
Mesh generate_mesh(const WedgeGeometry& g, double h);

/// Plain text: "nodes N" then "id x y" lines, "triangles M" then "id a b c",
/// "edges K" then "a b tag".
void write_mesh_text(std::ostream& os, const Mesh& m);

/// Legacy VTK unstructured grid with optional nodal scalars.
void write_mesh_vtk(std::ostream& os, const Mesh& m, const std::vector<double>* scalars = nullptr,
                    const std::string& scalar_name = "value");

} // namespace cornergl

#include "cornergl/mesh.hpp"

#include "cornergl/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace cornergl {

std::string to_string(EdgeTag tag) {
  switch (tag) {
  case EdgeTag::Out: return "out";
  case EdgeTag::In: return "in";
  case EdgeTag::Bd: return "bd";
  case EdgeTag::Bisectrix: return "bis";
  }
  return "?";
}

double Mesh::triangle_area(int k) const {
  const auto& t = triangles[k];
  const Vec2 u = nodes[t[1]] - nodes[t[0]];
  const Vec2 v = nodes[t[2]] - nodes[t[0]];
  return 0.5 * (u.x * v.y - u.y * v.x);
}

double Mesh::total_area() const {
  double a = 0.0;
  for (int k = 0; k < static_cast<int>(triangles.size()); ++k) a += triangle_area(k);
  return a;
}

double Mesh::min_angle_deg() const {
  double m = 180.0;
  for (const auto& t : triangles) {
    for (int c = 0; c < 3; ++c) {
      const Vec2 u = nodes[t[(c + 1) % 3]] - nodes[t[c]];
      const Vec2 v = nodes[t[(c + 2) % 3]] - nodes[t[c]];
      const double ang = std::atan2(std::abs(u.x * v.y - u.y * v.x), u.x * v.x + u.y * v.y);
      m = std::min(m, ang * 180.0 / M_PI);
    }
  }
  return m;
}

int Mesh::count(EdgeTag tag) const {
  return static_cast<int>(std::count_if(edges.begin(), edges.end(),
                                        [&](const TaggedEdge& e) { return e.tag == tag; }));
}

Mesh generate_mesh(const WedgeGeometry& g, double h) {
  if (!(h > 0.0) || h > g.ell / 8.0 * (1.0 + 1e-12))
    throw Error(ErrorKind::MeshFailure, "geometry", "mesh size must satisfy 0 < h <= ell / 8");

  Mesh m;
  m.h = h;
  m.nt = static_cast<int>(std::ceil(g.ell / h - 1e-9));
  m.ns = static_cast<int>(std::ceil(g.L / h - 1e-9));
  const int nt = m.nt, ns = m.ns;
  const double k = std::tan(0.5 * g.signed_deficit());

  // Node (i, j) with i in [-ns, ns]: i > 0 plus patch, i < 0 minus patch,
  // i = 0 the bisectrix column.
  auto id = [&](int i, int j) { return j * (2 * ns + 1) + (i + ns); };
  m.nodes.resize((2 * ns + 1) * (nt + 1));
  m.coords.resize(m.nodes.size());
  for (int j = 0; j <= nt; ++j) {
    const double t = g.ell * j / nt;
    const double s_bis = t * k;
    for (int i = -ns; i <= ns; ++i) {
      PatchCoords c;
      if (i >= 0) {
        c = {Patch::Plus, i == ns ? g.L : s_bis + (g.L - s_bis) * i / ns, t};
      } else {
        c = {Patch::Minus, i == -ns ? -g.L : -s_bis + (-g.L + s_bis) * (-i) / ns, t};
      }
      m.coords[id(i, j)] = c;
      m.nodes[id(i, j)] = patch_to_cartesian(g, c);
    }
  }

  // Diagonals run away from the bisectrix so the two patches mirror.
  for (int j = 0; j < nt; ++j) {
    for (int i = -ns; i < ns; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if (i >= 0) {
        m.triangles.push_back({a, b, c});
        m.triangles.push_back({a, c, d});
      } else {
        m.triangles.push_back({a, b, d});
        m.triangles.push_back({b, c, d});
      }
    }
  }

  for (int i = -ns; i < ns; ++i) {
    m.edges.push_back({id(i, 0), id(i + 1, 0), EdgeTag::Out});
    m.edges.push_back({id(i, nt), id(i + 1, nt), EdgeTag::In});
  }
  for (int j = 0; j < nt; ++j) {
    m.edges.push_back({id(ns, j), id(ns, j + 1), EdgeTag::Bd});
    m.edges.push_back({id(-ns, j), id(-ns, j + 1), EdgeTag::Bd});
    m.edges.push_back({id(0, j), id(0, j + 1), EdgeTag::Bisectrix});
  }

  m.dirichlet.assign(m.nodes.size(), false);
  for (const auto& e : m.edges) {
    if (e.tag == EdgeTag::In || e.tag == EdgeTag::Bd) m.dirichlet[e.a] = m.dirichlet[e.b] = true;
  }

  for (int t = 0; t < static_cast<int>(m.triangles.size()); ++t) {
    if (!(m.triangle_area(t) > 0.0))
      throw Error(ErrorKind::MeshFailure, "geometry", "non-positive triangle orientation");
  }
  if (m.min_angle_deg() < 20.0)
    throw Error(ErrorKind::MeshFailure, "geometry", "minimum angle below 20 degrees");
  return m;
}

void write_mesh_text(std::ostream& os, const Mesh& m) {
  const auto old = os.precision(17);
  os << "nodes " << m.nodes.size() << '\n';
  for (std::size_t i = 0; i < m.nodes.size(); ++i) os << i << ' ' << m.nodes[i].x << ' ' << m.nodes[i].y << '\n';
  os << "triangles " << m.triangles.size() << '\n';
  for (std::size_t k = 0; k < m.triangles.size(); ++k) {
    const auto& t = m.triangles[k];
    os << k << ' ' << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  }
  os << "edges " << m.edges.size() << '\n';
  for (const auto& e : m.edges) os << e.a << ' ' << e.b << ' ' << to_string(e.tag) << '\n';
  os.precision(old);
}

void write_mesh_vtk(std::ostream& os, const Mesh& m, const std::vector<double>* scalars,
                    const std::string& scalar_name) {
  const auto old = os.precision(17);
  os << "# vtk DataFile Version 3.0\nwedge mesh\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << m.nodes.size() << " double\n";
  for (const auto& p : m.nodes) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << m.triangles.size() << ' ' << 4 * m.triangles.size() << '\n';
  for (const auto& t : m.triangles) os << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  os << "CELL_TYPES " << m.triangles.size() << '\n';
  for (std::size_t k = 0; k < m.triangles.size(); ++k) os << "5\n";
  if (scalars != nullptr) {
    os << "POINT_DATA " << m.nodes.size() << "\nSCALARS " << scalar_name << " double 1\nLOOKUP_TABLE default\n";
    for (double v : *scalars) os << v << '\n';
  }
  os.precision(old);
}

} // namespace cornergl

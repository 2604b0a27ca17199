#pragma once

// Discrete GL functional on a wedge mesh with the fixed potential
// F = (-y, x) / 2:
//
//   G_h[psi] = sum_edges w_pq |psi_q e^{i theta_pq} - psi_p|^2
//            + sum_nodes m_i ( -(1/b) |psi_i|^2 + (1/2b) |psi_i|^4 )
//
// w_pq are the P1 cotangent weights, theta_pq = int_p^q F . dl is the exact
// line integral of the linear potential, m_i is the lumped mass. The kinetic
// term is gauge covariant, so the large phase gradients of the boundary data
// (of size L/2) do not enter the discretisation error.

#include "cornergl/effective1d.hpp"
#include "cornergl/geometry.hpp"
#include "cornergl/mesh.hpp"

#include "json.hpp"

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace cornergl {

using cplx = std::complex<double>;

struct ComplexField {
  const Mesh* mesh = nullptr;
  std::vector<cplx> values;
};

Vec2 magnetic_potential(Vec2 p);

/// psi_star = f0(t) exp(-i alpha0 s - i s t / 2) in the given patch frame.
cplx boundary_data(const Effective1DSolution& sol, PatchCoords c);
/// Same, after locating p; throws OutsideDomain.
cplx boundary_data(const WedgeGeometry& g, const Effective1DSolution& sol, Vec2 p);

/// Precomputed edge weights, link phases and lumped masses of a mesh.
class GLDiscretisation {
public:
  GLDiscretisation(const Mesh& mesh, double b);

  struct Edge {
    int p;
    int q;
    double w;
    cplx link; ///< exp(i theta_pq)
  };

  struct Breakdown {
    double kinetic = 0.0;
    double quadratic = 0.0; ///< -(1/b) sum m |psi|^2
    double quartic = 0.0;   ///< (1/2b) sum m |psi|^4
    double total() const { return kinetic + quadratic + quartic; }
  };

  Breakdown energy(const std::vector<cplx>& psi) const;
  /// Gradient w.r.t. the real inner product Re<a, b>; Dirichlet entries zero.
  std::vector<cplx> gradient(const std::vector<cplx>& psi) const;

  const Mesh& mesh() const { return *mesh_; }
  double b() const { return b_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& mass() const { return mass_; }

private:
  const Mesh* mesh_;
  double b_;
  std::vector<Edge> edges_;
  std::vector<double> mass_;
};

double gl_energy(const ComplexField& field, double b, GLDiscretisation::Breakdown* breakdown = nullptr);
ComplexField gl_gradient(const ComplexField& field, double b);

struct GLOptions {
  double tol_factor = 1e-8; ///< stop at |grad| <= tol_factor sqrt(N_free)
  int max_iterations = 50000;
  int memory = 10;          ///< L-BFGS history
  double gamma = -1.0;      ///< transition width of the initial guess; < 0: delta^{2/3}
  /// Extra starts when e_corner is further than 50% from this reference.
  std::optional<double> expected_corner;
  std::uint64_t seed = 0;
};

struct CornerEnergyResult {
  double beta = 0.0;
  double delta = 0.0;
  double b = 0.0;
  double L = 0.0;
  double ell = 0.0;
  double h = 0.0;
  double gamma = 0.0;
  double e_gamma = 0.0;
  double e_corner = 0.0;    ///< e_gamma - 2 L e1d
  double e_initial = 0.0;   ///< energy of the starting state
  double e1d = 0.0;
  double grad_norm = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
  int n_nodes = 0;
  int n_free = 0;
  bool converged = false;
  int starts = 1;
  int distinct_minima = 1;
  GLDiscretisation::Breakdown breakdown;
  std::vector<std::string> warnings;
};

struct GLMinimizer {
  ComplexField field;
  CornerEnergyResult result;
};

/// Starting field: psi_trial with the options' gamma; Dirichlet nodes carry psi_star.
GLMinimizer minimize_gl(const WedgeGeometry& g, const Mesh& mesh, const Effective1DSolution& sol,
                        double b, const GLOptions& opts = {});

/// Same, from a given start (Dirichlet entries are overwritten with psi_star).
GLMinimizer minimize_gl_from(const WedgeGeometry& g, const Mesh& mesh, const Effective1DSolution& sol,
                             double b, std::vector<cplx> start, const GLOptions& opts = {});

/// psi_star on Dirichlet nodes, f0(t) e^{i Phi_patch} elsewhere.
std::vector<cplx> patch_extension(const Mesh& mesh, const Effective1DSolution& sol);

nlohmann::json to_json(const CornerEnergyResult& r);
void write_field(std::ostream& os, const ComplexField& field);
ComplexField read_field(std::istream& is, const Mesh& mesh);

} // namespace cornergl

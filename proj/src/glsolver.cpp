#include "cornergl/glsolver.hpp"

#include "cornergl/analysis.hpp"
#include "cornergl/error.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace cornergl {

Vec2 magnetic_potential(Vec2 p) { return {-0.5 * p.y, 0.5 * p.x}; }

cplx boundary_data(const Effective1DSolution& sol, PatchCoords c) {
  const double f = sol.f0(c.t);
  return std::polar(f, -sol.alpha0 * c.s - 0.5 * c.s * c.t);
}

cplx boundary_data(const WedgeGeometry& g, const Effective1DSolution& sol, Vec2 p) {
  return boundary_data(sol, map_coordinates(g, p).patch);
}

// ---------------------------------------------------------------------------
// Discretisation

GLDiscretisation::GLDiscretisation(const Mesh& mesh, double b) : mesh_(&mesh), b_(b) {
  struct Contribution {
    std::uint64_t key;
    double w;
  };
  std::vector<Contribution> contrib;
  contrib.reserve(3 * mesh.triangles.size());
  mass_.assign(mesh.size(), 0.0);
  for (int k = 0; k < static_cast<int>(mesh.triangles.size()); ++k) {
    const auto& tri = mesh.triangles[k];
    const double area = mesh.triangle_area(k);
    for (int c = 0; c < 3; ++c) {
      mass_[tri[c]] += area / 3.0;
      const int r = tri[c], p = tri[(c + 1) % 3], q = tri[(c + 2) % 3];
      const Vec2 u = mesh.nodes[p] - mesh.nodes[r];
      const Vec2 v = mesh.nodes[q] - mesh.nodes[r];
      const double cot = (u.x * v.x + u.y * v.y) / std::abs(u.x * v.y - u.y * v.x);
      const auto lo = static_cast<std::uint64_t>(std::min(p, q));
      const auto hi = static_cast<std::uint64_t>(std::max(p, q));
      contrib.push_back({(lo << 32) | hi, 0.5 * cot});
    }
  }
  std::sort(contrib.begin(), contrib.end(),
            [](const Contribution& a, const Contribution& b) { return a.key < b.key; });
  for (std::size_t i = 0; i < contrib.size();) {
    double w = 0.0;
    std::size_t j = i;
    for (; j < contrib.size() && contrib[j].key == contrib[i].key; ++j) w += contrib[j].w;
    const int p = static_cast<int>(contrib[i].key >> 32);
    const int q = static_cast<int>(contrib[i].key & 0xffffffffu);
    const Vec2 a = mesh.nodes[p], c = mesh.nodes[q];
    const double theta = 0.5 * (a.x * c.y - c.x * a.y);
    if (w != 0.0) edges_.push_back({p, q, w, std::polar(1.0, theta)});
    i = j;
  }
}

GLDiscretisation::Breakdown GLDiscretisation::energy(const std::vector<cplx>& psi) const {
  Breakdown out;
  for (const auto& e : edges_) out.kinetic += e.w * std::norm(e.link * psi[e.q] - psi[e.p]);
  for (int i = 0; i < static_cast<int>(psi.size()); ++i) {
    const double r2 = std::norm(psi[i]);
    out.quadratic -= mass_[i] * r2 / b_;
    out.quartic += mass_[i] * r2 * r2 / (2.0 * b_);
  }
  return out;
}

std::vector<cplx> GLDiscretisation::gradient(const std::vector<cplx>& psi) const {
  std::vector<cplx> g(psi.size(), 0.0);
  for (const auto& e : edges_) {
    const cplx d = e.link * psi[e.q] - psi[e.p];
    g[e.p] -= 2.0 * e.w * d;
    g[e.q] += 2.0 * e.w * std::conj(e.link) * d;
  }
  for (int i = 0; i < static_cast<int>(psi.size()); ++i) {
    g[i] += mass_[i] * (2.0 / b_) * (std::norm(psi[i]) - 1.0) * psi[i];
    if (mesh_->dirichlet[i]) g[i] = 0.0;
  }
  return g;
}

double gl_energy(const ComplexField& field, double b, GLDiscretisation::Breakdown* breakdown) {
  const GLDiscretisation disc(*field.mesh, b);
  const auto e = disc.energy(field.values);
  if (breakdown != nullptr) *breakdown = e;
  return e.total();
}

ComplexField gl_gradient(const ComplexField& field, double b) {
  const GLDiscretisation disc(*field.mesh, b);
  return {field.mesh, disc.gradient(field.values)};
}

std::vector<cplx> patch_extension(const Mesh& mesh, const Effective1DSolution& sol) {
  std::vector<cplx> psi(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) psi[i] = boundary_data(sol, mesh.coords[i]);
  return psi;
}

// ---------------------------------------------------------------------------
// Minimisation

namespace {

using Vec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<cplx>;

double rdot(const Vec& a, const Vec& b) { return a.dot(b).real(); }

class FreeSpace {
public:
  explicit FreeSpace(const Mesh& mesh) {
    index_.assign(mesh.size(), -1);
    for (int i = 0; i < mesh.size(); ++i) {
      if (!mesh.dirichlet[i]) {
        index_[i] = static_cast<int>(nodes_.size());
        nodes_.push_back(i);
      }
    }
  }
  int size() const { return static_cast<int>(nodes_.size()); }
  int index(int node) const { return index_[node]; }
  Vec gather(const std::vector<cplx>& full) const {
    Vec v(size());
    for (int k = 0; k < size(); ++k) v[k] = full[nodes_[k]];
    return v;
  }
  void scatter(const Vec& v, std::vector<cplx>& full) const {
    for (int k = 0; k < size(); ++k) full[nodes_[k]] = v[k];
  }

private:
  std::vector<int> index_;
  std::vector<int> nodes_;
};

// Magnetic stiffness plus mass on the free nodes; Hermitian positive definite.
SpMat preconditioner_matrix(const GLDiscretisation& disc, const FreeSpace& fs, double shift) {
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(4 * disc.edges().size() + fs.size());
  for (const auto& e : disc.edges()) {
    const int p = fs.index(e.p), q = fs.index(e.q);
    if (p >= 0) trip.emplace_back(p, p, e.w);
    if (q >= 0) trip.emplace_back(q, q, e.w);
    if (p >= 0 && q >= 0) {
      trip.emplace_back(p, q, -e.w * e.link);
      trip.emplace_back(q, p, -e.w * std::conj(e.link));
    }
  }
  for (int i = 0; i < disc.mesh().size(); ++i) {
    const int k = fs.index(i);
    if (k >= 0) trip.emplace_back(k, k, shift * disc.mass()[i]);
  }
  SpMat m(fs.size(), fs.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

struct Descent {
  std::vector<cplx> psi;
  double energy = 0.0;
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

Descent lbfgs(const GLDiscretisation& disc, std::vector<cplx> psi, const GLOptions& opts) {
  const FreeSpace fs(disc.mesh());
  Descent out;
  if (fs.size() == 0) {
    out.psi = std::move(psi);
    out.energy = disc.energy(out.psi).total();
    out.converged = true;
    return out;
  }
  Eigen::SimplicialLDLT<SpMat> precond;
  precond.compute(preconditioner_matrix(disc, fs, 1.0));
  if (precond.info() != Eigen::Success)
    throw Error(ErrorKind::NonConvergence, "glsolver", "preconditioner factorisation failed");

  const double tol = opts.tol_factor * std::sqrt(static_cast<double>(fs.size()));
  auto full = psi;
  Vec x = fs.gather(full);
  auto eval = [&](const Vec& v, Vec* grad) {
    fs.scatter(v, full);
    if (grad != nullptr) *grad = fs.gather(disc.gradient(full));
    return disc.energy(full).total();
  };

  Vec g;
  double e = eval(x, &g);
  std::deque<Vec> S, Y;
  std::deque<double> R;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const double gn = g.norm();
    if (gn <= tol) {
      out.converged = true;
      break;
    }
    // Two-loop recursion with the preconditioner as initial inverse Hessian.
    Vec q = g;
    std::vector<double> alpha(S.size());
    for (int k = static_cast<int>(S.size()) - 1; k >= 0; --k) {
      alpha[k] = R[k] * rdot(S[k], q);
      q -= alpha[k] * Y[k];
    }
    Vec r = precond.solve(q) * 0.5;
    if (!S.empty()) {
      const Vec py = precond.solve(Y.back()) * 0.5;
      const double scale = rdot(S.back(), Y.back()) / rdot(Y.back(), py);
      if (scale > 0.0 && std::isfinite(scale)) r *= scale;
    }
    for (std::size_t k = 0; k < S.size(); ++k) {
      const double beta = R[k] * rdot(Y[k], r);
      r += (alpha[k] - beta) * S[k];
    }
    Vec d = -r;
    double slope = rdot(g, d);
    if (!(slope < 0.0)) {
      S.clear();
      Y.clear();
      R.clear();
      d = -precond.solve(g) * 0.5;
      slope = rdot(g, d);
    }

    double step = 1.0;
    Vec x_new, g_new;
    double e_new = e;
    bool accepted = false;
    for (int k = 0; k < 40; ++k, step *= 0.5) {
      x_new = x + step * d;
      e_new = eval(x_new, &g_new);
      if (e_new <= e + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Energy differences below round-off; accept a step that still
      // reduces the gradient, otherwise stop.
      x_new = x + d;
      e_new = eval(x_new, &g_new);
      if (!(g_new.norm() < gn && e_new <= e + 1e-13 * std::abs(e))) break;
    }
    Vec s = x_new - x;
    Vec y = g_new - g;
    const double sy = rdot(s, y);
    if (sy > 1e-14 * s.norm() * y.norm()) {
      S.push_back(std::move(s));
      Y.push_back(std::move(y));
      R.push_back(1.0 / sy);
      if (static_cast<int>(S.size()) > opts.memory) {
        S.pop_front();
        Y.pop_front();
        R.pop_front();
      }
    }
    x = std::move(x_new);
    g = std::move(g_new);
    e = e_new;
  }
  out.iterations = it;
  out.grad_norm = g.norm();
  out.converged = out.converged || out.grad_norm <= tol;
  fs.scatter(x, full);
  out.psi = std::move(full);
  out.energy = disc.energy(out.psi).total();
  return out;
}

void impose_dirichlet(const Mesh& mesh, const Effective1DSolution& sol, std::vector<cplx>& psi) {
  for (int i = 0; i < mesh.size(); ++i)
    if (mesh.dirichlet[i]) psi[i] = boundary_data(sol, mesh.coords[i]);
}

void check_inputs(const WedgeGeometry& g, const Mesh& mesh, const Effective1DSolution& sol, double b) {
  if (sol.degenerate)
    throw Error(ErrorKind::DegenerateMinimizer, "glsolver", "boundary data needs a nontrivial 1D profile");
  if (std::abs(sol.ell - g.ell) > 1e-12 * g.ell || std::abs(sol.b - b) > 1e-14)
    throw Error(ErrorKind::InvalidParams, "glsolver", "1D solution does not match (b, ell) of the wedge");
  if (mesh.size() == 0) throw Error(ErrorKind::InvalidParams, "glsolver", "empty mesh");
}

} // namespace

GLMinimizer minimize_gl_from(const WedgeGeometry& g, const Mesh& mesh, const Effective1DSolution& sol,
                             double b, std::vector<cplx> start, const GLOptions& opts) {
  check_inputs(g, mesh, sol, b);
  if (static_cast<int>(start.size()) != mesh.size())
    throw Error(ErrorKind::InvalidParams, "glsolver", "start field does not match the mesh");
  impose_dirichlet(mesh, sol, start);

  const GLDiscretisation disc(mesh, b);
  GLMinimizer out;
  auto& r = out.result;
  r.beta = g.beta;
  r.delta = g.delta;
  r.b = b;
  r.L = g.L;
  r.ell = g.ell;
  r.h = mesh.h;
  r.e1d = sol.e1d;
  r.n_nodes = mesh.size();
  r.n_free = static_cast<int>(std::count(mesh.dirichlet.begin(), mesh.dirichlet.end(), false));
  r.tolerance = opts.tol_factor * std::sqrt(static_cast<double>(r.n_free));
  r.e_initial = disc.energy(start).total();

  auto run = lbfgs(disc, std::move(start), opts);
  r.e_gamma = run.energy;
  r.grad_norm = run.grad_norm;
  r.iterations = run.iterations;
  r.converged = run.converged;
  r.breakdown = disc.energy(run.psi);
  r.e_corner = r.e_gamma - 2.0 * g.L * sol.e1d;
  if (!r.converged) r.warnings.push_back("gradient tolerance not reached");
  out.field = {&mesh, std::move(run.psi)};
  return out;
}

GLMinimizer minimize_gl(const WedgeGeometry& g, const Mesh& mesh, const Effective1DSolution& sol,
                        double b, const GLOptions& opts) {
  check_inputs(g, mesh, sol, b);
  const double gamma = opts.gamma >= 0.0 ? opts.gamma : default_gamma(g.delta, g.beta);
  const TrialState trial(g, sol, gamma);
  auto best = minimize_gl_from(g, mesh, sol, b, trial.on_mesh(mesh), opts);
  best.result.gamma = gamma;

  const auto& exp = opts.expected_corner;
  if (exp && std::abs(best.result.e_corner - *exp) > 0.5 * std::abs(*exp)) {
    std::vector<double> minima{best.result.e_gamma};
    const double e_trial = best.result.e_initial;
    std::vector<std::vector<cplx>> starts;
    starts.push_back(patch_extension(mesh, sol));
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> noise(0.0, 1e-2);
    auto perturbed = trial.on_mesh(mesh);
    for (auto& z : perturbed) z += cplx(noise(rng), noise(rng)) * std::abs(z);
    starts.push_back(std::move(perturbed));
    for (auto& s : starts) {
      auto cand = minimize_gl_from(g, mesh, sol, b, std::move(s), opts);
      minima.push_back(cand.result.e_gamma);
      if (cand.result.e_gamma < best.result.e_gamma) {
        cand.result.gamma = gamma;
        best = std::move(cand);
      }
    }
    best.result.e_initial = e_trial;
    best.result.starts = static_cast<int>(minima.size());
    std::sort(minima.begin(), minima.end());
    int distinct = 1;
    for (std::size_t k = 1; k < minima.size(); ++k)
      if (minima[k] - minima[k - 1] > 1e-8 * std::abs(minima[k])) ++distinct;
    best.result.distinct_minima = distinct;
    best.result.warnings.push_back("multistart triggered: e_corner far from the expected value");
  }
  return best;
}

nlohmann::json to_json(const CornerEnergyResult& r) {
  return {{"beta", r.beta},
          {"delta", r.delta},
          {"b", r.b},
          {"L", r.L},
          {"ell", r.ell},
          {"h", r.h},
          {"gamma", r.gamma},
          {"e_gamma", r.e_gamma},
          {"e_corner", r.e_corner},
          {"e_initial", r.e_initial},
          {"e1d", r.e1d},
          {"grad_norm", r.grad_norm},
          {"tolerance", r.tolerance},
          {"iterations", r.iterations},
          {"converged", r.converged},
          {"n_nodes", r.n_nodes},
          {"n_free", r.n_free},
          {"starts", r.starts},
          {"distinct_minima", r.distinct_minima},
          {"kinetic", r.breakdown.kinetic},
          {"potential_quadratic", r.breakdown.quadratic},
          {"potential_quartic", r.breakdown.quartic},
          {"warnings", r.warnings}};
}

void write_field(std::ostream& os, const ComplexField& field) {
  const auto old = os.precision(17);
  os << "# node re im\n";
  for (std::size_t i = 0; i < field.values.size(); ++i)
    os << i << ' ' << field.values[i].real() << ' ' << field.values[i].imag() << '\n';
  os.precision(old);
}

ComplexField read_field(std::istream& is, const Mesh& mesh) {
  ComplexField f{&mesh, std::vector<cplx>(mesh.size())};
  std::string line;
  int count = 0;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int id;
    double re, im;
    if (!(ls >> id >> re >> im) || id < 0 || id >= mesh.size())
      throw Error(ErrorKind::IoError, "glsolver", "malformed field line: " + line);
    f.values[id] = {re, im};
    ++count;
  }
  if (count != mesh.size()) throw Error(ErrorKind::IoError, "glsolver", "field file does not cover the mesh");
  return f;
}

} // namespace cornergl

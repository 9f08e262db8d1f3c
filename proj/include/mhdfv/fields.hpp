#pragma once
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhdfv/mesh.hpp"

namespace mhdfv {

// conserved variable slots: momentum, magnetic field, GLM scalar
constexpr int NV = 5;
constexpr int IW1 = 0, IW2 = 1, IB1 = 2, IB2 = 3, IPSI = 4;

struct Vars {
  double q[NV] = {0, 0, 0, 0, 0};
  double& operator[](int k) { return q[k]; }
  double operator[](int k) const { return q[k]; }
  Vec2 w() const { return {q[IW1], q[IW2]}; }
  Vec2 B() const { return {q[IB1], q[IB2]}; }
  Vars operator+(const Vars& o) const {
    Vars r; for (int k = 0; k < NV; ++k) r.q[k] = q[k] + o.q[k]; return r;
  }
  Vars operator-(const Vars& o) const {
    Vars r; for (int k = 0; k < NV; ++k) r.q[k] = q[k] - o.q[k]; return r;
  }
  Vars operator*(double s) const {
    Vars r; for (int k = 0; k < NV; ++k) r.q[k] = q[k] * s; return r;
  }
};

// per-variable spatial gradient
struct VarsGrad {
  Vec2 g[NV];
  Vec2& operator[](int k) { return g[k]; }
  const Vec2& operator[](int k) const { return g[k]; }
};

enum class DivMode { CT, GLM, none };
enum class FluxType { Rusanov, Ducros };
enum class LimiterType { none, BarthJespersen };

struct SchemeConfig {
  bool well_balanced = false;
  DivMode divergence_mode = DivMode::CT;
  FluxType flux = FluxType::Rusanov;
  bool pressure_correction = true;
  LimiterType limiter = LimiterType::none;
  double cfl = 0.45;
  double mu = 0, eta = 0, rho = 1;
  double c_h = 0;  // <= 0: set from the initial maximum signal speed
  double t_end = 1;
  double dt_fixed = 0;  // > 0 overrides the CFL-driven time step
  double dt_max = 1e-2;
  double cg_tol = 1e-12;
  int cg_maxiter = 200000;
  int output_every = 0;
  void validate() const {
    if (!(cfl > 0 && cfl <= 0.5)) throw std::runtime_error("config: CFL must lie in (0, 0.5]");
    if (mu < 0 || eta < 0) throw std::runtime_error("config: negative viscosity or resistivity");
    if (rho <= 0) throw std::runtime_error("config: density must be positive");
  }
};

struct State {
  double rho = 1;
  double t = 0;
  std::vector<Vec2> w;        // per element
  std::vector<Vec2> B;        // per element
  std::vector<double> psi;    // per element (GLM)
  std::vector<double> Bface;  // per face: normal flux average
  std::vector<double> p;      // per merged vertex
  std::vector<Vec2> wdual;    // per dual cell (= face): momentum history
};

// prescribed stationary solution, analytic plus frozen discrete samples;
// the zero equilibrium reduces every well-balanced formula to its plain form
struct Equilibrium {
  bool zero = true;
  std::function<Vec2(Vec2)> u_fn, B_fn;
  std::function<double(Vec2)> p_fn, A3_fn;  // A3_fn may be empty
  double mu = 0, eta = 0, rho = 1;

  std::vector<Vars> Q_i;          // element barycenters
  std::vector<Vars> Q_f;          // face barycenters (face frame)
  std::vector<Mat2> gradu_f;      // velocity gradient at face barycenters
  std::vector<Mat2> gradB_f;
  std::vector<double> p_f;        // vertex-average pressure per face
  std::vector<double> p_v;        // per merged vertex
  std::vector<double> Bface;      // face-normal flux averages
  std::vector<Vec2> w_dual;       // per dual cell, sampled at the face barycenter
  std::vector<double> Evert;      // equilibrium vertex electric field (CT setup)
};

// wall data for one boundary face; periodic boundaries are already fused
// into interior faces by the mesh builder and never reach this point
struct WallBC {
  Vec2 u;              // prescribed wall velocity
  Vec2 B;              // prescribed wall magnetic field (fix_B only)
  bool fix_B = false;  // mirror B to the wall value instead of zero-gradient
};

struct BoundarySet {
  std::vector<WallBC> face;     // by face id; used for boundary faces only
  std::vector<Vec2> vert_u;     // wall velocity per merged vertex
  std::vector<char> vert_wall;  // 1 where vert_u applies
};

Equilibrium make_zero_equilibrium(const PrimalMesh& m);
Equilibrium make_equilibrium(const PrimalMesh& m, std::function<Vec2(Vec2)> u_fn,
                             std::function<Vec2(Vec2)> B_fn, std::function<double(Vec2)> p_fn,
                             std::function<double(Vec2)> A3_fn, double mu, double eta, double rho);

template <class T>
std::vector<T> primal_to_dual(const std::vector<T>& cell, const PrimalMesh& m, const DualMesh& d) {
  std::vector<T> out(m.face.size());
  for (size_t f = 0; f < m.face.size(); ++f) {
    const Face& F = m.face[f];
    if (F.boundary())
      out[f] = cell[F.left];
    else
      out[f] = (cell[F.left] * d.subL[f] + cell[F.right] * d.subR[f]) * (1.0 / d.vol[f]);
  }
  return out;
}

template <class T>
std::vector<T> dual_to_primal(const std::vector<T>& dualv, const PrimalMesh& m, const DualMesh& d) {
  std::vector<T> out(m.elem.size());
  for (size_t i = 0; i < m.elem.size(); ++i) {
    T acc = dualv[m.elem[i].faces[0].f] * d.sub(m, int(i), m.elem[i].faces[0]);
    for (size_t k = 1; k < m.elem[i].faces.size(); ++k)
      acc = acc + dualv[m.elem[i].faces[k].f] * d.sub(m, int(i), m.elem[i].faces[k]);
    out[i] = acc * (1.0 / m.elem[i].area);
  }
  return out;
}

std::vector<Vec2> delta_momentum_transfer(const std::vector<Vec2>& w_tilde,
                                          const std::vector<Vec2>& w_n,
                                          const std::vector<Vec2>& w_n_dual, const PrimalMesh& m,
                                          const DualMesh& d);

double l2_error_cells(const std::vector<double>& q, const std::function<double(Vec2)>& exact,
                      const PrimalMesh& m);
std::vector<double> lumped_vertex_measures(const PrimalMesh& m);
// vertex-field error; both fields are shifted to a common mean first, since
// the pressure is only determined up to a constant
double l2_error_vertices(const std::vector<double>& p, const std::function<double(Vec2)>& exact,
                         const PrimalMesh& m, bool align_means);

}  // namespace mhdfv

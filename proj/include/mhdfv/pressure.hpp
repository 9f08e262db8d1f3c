#pragma once
#include <array>

#include "mhdfv/fields.hpp"

namespace mhdfv {

// matrix-free continuous FE stiffness operator on the merged vertices;
// triangles carry linear basis functions, quadrilaterals bilinear ones
struct PoissonSystem {
  const PrimalMesh* m = nullptr;
  // local stiffness matrices, nv x nv per element, row-major
  std::vector<std::array<double, 16>> local;
  std::vector<double> lumped;  // vertex measures, for means and diagnostics

  // out = A v, accumulated vertex by vertex (deterministic gather)
  void apply(const std::vector<double>& v, std::vector<double>& out) const;
};

PoissonSystem assemble_stiffness(const PrimalMesh& m);

// weak divergence of the dual momentum excess over the equilibrium samples,
// scaled by 1/dt; wall boundary terms vanish (zero normal momentum excess)
std::vector<double> assemble_rhs(const std::vector<Vec2>& w_dual, const Equilibrium& e,
                                 const PrimalMesh& m, const DualMesh& d, double dt);

// conjugate gradient with the constant kernel projected out each iteration;
// returns the iteration count, throws when maxiter is hit
int solve_cg(const PoissonSystem& sys, const std::vector<double>& b, std::vector<double>& x,
             double tol, int maxiter);

// gradient of the solved increment per dual cell and per element, and the
// corresponding momentum corrections w -= dt * grad(dp)
void post_projection(std::vector<Vec2>& w_primal, std::vector<Vec2>& w_dual,
                     const std::vector<double>& dp, double dt, const PrimalMesh& m,
                     const DualMesh& d);

// five projection cycles with dt = 1e-7 correcting the momentum only,
// run once on fresh initial data; also installs the dual momentum history
void initial_divergence_cleanup(State& s, const Equilibrium& e, const PrimalMesh& m,
                                const DualMesh& d, const PoissonSystem& sys,
                                const SchemeConfig& cfg);

}  // namespace mhdfv

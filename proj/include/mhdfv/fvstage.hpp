#pragma once
#include "mhdfv/flux.hpp"
#include "mhdfv/recon.hpp"

namespace mhdfv {

// result of the explicit transport-diffusion stage: intermediate momentum
// (before the pressure projection) and the auxiliary cell magnetic field
struct IntermediateState {
  std::vector<Vec2> w;
  std::vector<Vec2> B;
  std::vector<double> psi;
};

double face_pressure(const std::vector<double>& p_vert, const PrimalMesh& m, int f);

// ghost value across a wall face from the interior trace: momentum mirrored
// around the wall velocity, B mirrored or copied, the GLM scalar copied
Vars wall_ghost(const Vars& inner, const WallBC& bc, double rho);

// one explicit step; equilibrium face fluxes are subtracted term by term so
// the prescribed steady state is a fixed point to round-off. bc may be null
// when the mesh has no boundary faces. In GLM mode the scalar is advanced too.
IntermediateState transport_diffusion_step(const State& s, const Equilibrium& e,
                                           const ReconstructionSet& r, const PrimalMesh& m,
                                           const BoundarySet* bc, double dt,
                                           const SchemeConfig& cfg);

}  // namespace mhdfv

#pragma once
#include "mhdfv/recon.hpp"

namespace mhdfv {

// z-component of the electric field averaged at each merged vertex: ideal
// -(u x B), resistive eta curl B via a loop integral over the vertex dual,
// and an upwind stabilization scaled by the local signal speed.
// Passing r = nullptr evaluates the prescribed equilibrium alone (used once
// at setup to freeze the reference values the update subtracts).
std::vector<double> vertex_electric_fields(const PrimalMesh& m, const VertexDualSet& vd,
                                           const ReconstructionSet* r, const Equilibrium& e,
                                           const std::vector<Vec2>& cell_w,
                                           const std::vector<Vec2>& cell_B, double half_dt,
                                           const BoundarySet* bc, const SchemeConfig& cfg);

// discrete Stokes update of the face-normal flux averages; Eref holds the
// frozen equilibrium vertex fields (zero vector for the plain scheme)
void update_face_fluxes(std::vector<double>& Bface, const std::vector<double>& Evert,
                        const std::vector<double>& Eref, double dt, const PrimalMesh& m);

// per-element residuals r_i = sum_f sigma_if |Gamma_f| Bbar_f and their max
std::vector<double> face_divergence(const std::vector<double>& Bface, const PrimalMesh& m,
                                    double* max_abs = nullptr);

// exactly divergence-free initial fluxes from a scalar potential
std::vector<double> init_from_potential(const std::function<double(Vec2)>& A3,
                                        const PrimalMesh& m);

}  // namespace mhdfv

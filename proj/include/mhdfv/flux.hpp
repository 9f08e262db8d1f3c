#pragma once
#include "mhdfv/fields.hpp"

namespace mhdfv {

// numerical or physical flux dotted with the face normal
struct FluxPair {
  Vec2 mom;
  Vec2 mag;
  double glm = 0;
};

// F_c^v . n = w (u.n) + 1/2 |B|^2 n - B (B.n)
Vec2 conv_momentum_flux(const Vars& Q, double rho, const Vec2& n);
// F_c^B . n = B (u.n) - u (B.n), plus psi n in GLM mode
Vec2 conv_magnetic_flux(const Vars& Q, double rho, const Vec2& n, bool glm);
double glm_scalar_flux(const Vars& Q, double c_h, const Vec2& n);  // c_h^2 B.n
FluxPair physical_convective_flux(const Vars& Q, double rho, const Vec2& n, bool glm, double c_h);

Vec2 visc_momentum_flux(double mu, const Mat2& gradu, const Vec2& n);   // mu (grad u + grad u^T) n
Vec2 visc_magnetic_flux(double eta, const Mat2& gradB, const Vec2& n);  // eta (grad B - grad B^T) n

// the printed eigenvalue list, with u the velocity magnitude
void convective_eigenvalues(const Vars& Q, double rho, const Vec2& n, double out[8]);
double max_abs_eig(const Vars& Q, double rho, const Vec2& n, bool glm, double c_h);
// direction-independent bound max(2u, u + c_f) used for the time step
double max_signal_speed(const Vars& Q, double rho, bool glm, double c_h);

FluxPair rusanov_flux(const Vars& Qm, const Vars& Qp, double rho, const Vec2& n, bool glm,
                      double c_h);
FluxPair ducros_flux(const Vars& Qm, const Vars& Qp, double rho, const Vec2& n, bool glm,
                     double c_h);

double compute_dt(const State& s, const PrimalMesh& m, const SchemeConfig& cfg);

}  // namespace mhdfv

#include "mhdfv/flux.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mhdfv {

Vec2 conv_momentum_flux(const Vars& Q, double rho, const Vec2& n) {
  Vec2 w = Q.w(), B = Q.B();
  Vec2 u = w / rho;
  return w * dot(u, n) + n * (0.5 * dot(B, B)) - B * dot(B, n);
}

Vec2 conv_magnetic_flux(const Vars& Q, double rho, const Vec2& n, bool glm) {
  Vec2 w = Q.w(), B = Q.B();
  Vec2 u = w / rho;
  Vec2 r = B * dot(u, n) - u * dot(B, n);
  if (glm) r += n * Q[IPSI];
  return r;
}

double glm_scalar_flux(const Vars& Q, double c_h, const Vec2& n) {
  return c_h * c_h * dot(Q.B(), n);
}

FluxPair physical_convective_flux(const Vars& Q, double rho, const Vec2& n, bool glm, double c_h) {
  FluxPair fp;
  fp.mom = conv_momentum_flux(Q, rho, n);
  fp.mag = conv_magnetic_flux(Q, rho, n, glm);
  if (glm) fp.glm = glm_scalar_flux(Q, c_h, n);
  return fp;
}

Vec2 visc_momentum_flux(double mu, const Mat2& gradu, const Vec2& n) {
  Mat2 s = gradu + gradu.transposed();
  return (s * n) * mu;
}

Vec2 visc_magnetic_flux(double eta, const Mat2& gradB, const Vec2& n) {
  Mat2 s = gradB - gradB.transposed();
  return (s * n) * eta;
}

void convective_eigenvalues(const Vars& Q, double rho, const Vec2& n, double out[8]) {
  if (rho <= 0) throw std::runtime_error("flux: non-positive density");
  Vec2 B = Q.B();
  double u = norm(Q.w() / rho);
  double ca = std::sqrt(dot(B, n) * dot(B, n) / rho);
  double cf = std::sqrt(dot(B, B) / rho);
  out[0] = u - cf;
  out[1] = u - ca;
  out[2] = u;
  out[3] = u;
  out[4] = u;
  out[5] = 2 * u;
  out[6] = u + ca;
  out[7] = u + cf;
}

double max_abs_eig(const Vars& Q, double rho, const Vec2& n, bool glm, double c_h) {
  double lam[8];
  convective_eigenvalues(Q, rho, n, lam);
  double m = 0;
  for (double l : lam) m = std::max(m, std::fabs(l));
  if (glm) m = std::max(m, std::fabs(c_h));
  return m;
}

double max_signal_speed(const Vars& Q, double rho, bool glm, double c_h) {
  double u = norm(Q.w() / rho);
  double cf = std::sqrt(dot(Q.B(), Q.B()) / rho);
  double m = std::max(2 * u, u + cf);
  if (glm) m = std::max(m, std::fabs(c_h));
  return m;
}

FluxPair rusanov_flux(const Vars& Qm, const Vars& Qp, double rho, const Vec2& n, bool glm,
                      double c_h) {
  double a = std::max(max_abs_eig(Qm, rho, n, glm, c_h), max_abs_eig(Qp, rho, n, glm, c_h));
  FluxPair fm = physical_convective_flux(Qm, rho, n, glm, c_h);
  FluxPair fp = physical_convective_flux(Qp, rho, n, glm, c_h);
  FluxPair r;
  r.mom = (fm.mom + fp.mom) * 0.5 - (Qp.w() - Qm.w()) * a;
  r.mag = (fm.mag + fp.mag) * 0.5 - (Qp.B() - Qm.B()) * a;
  if (glm) r.glm = 0.5 * (fm.glm + fp.glm) - a * (Qp[IPSI] - Qm[IPSI]);
  return r;
}

FluxPair ducros_flux(const Vars& Qm, const Vars& Qp, double rho, const Vec2& n, bool glm,
                     double c_h) {
  double a = std::max(max_abs_eig(Qm, rho, n, glm, c_h), max_abs_eig(Qp, rho, n, glm, c_h));
  Vec2 wsum = Qm.w() + Qp.w();
  Vec2 Bsum = Qm.B() + Qp.B();
  Vec2 uij = (Qm.w() / rho + Qp.w() / rho) * 0.5;
  Vec2 Bij = Bsum * 0.5;
  double un = dot(uij, n);
  double Bn = dot(Bij, n);
  FluxPair r;
  r.mom = wsum * (0.5 * un) - Bsum * (0.5 * Bn) + n * (0.5 * dot(Bij, Bij)) -
          (Qp.w() - Qm.w()) * a;
  r.mag = Bsum * (0.5 * un) - wsum * (0.5 * Bn) - (Qp.B() - Qm.B()) * a;
  if (glm) {
    r.mag += n * (0.5 * (Qm[IPSI] + Qp[IPSI]));
    r.glm = c_h * c_h * Bn - a * (Qp[IPSI] - Qm[IPSI]);
  }
  return r;
}

double compute_dt(const State& s, const PrimalMesh& m, const SchemeConfig& cfg) {
  bool glm = cfg.divergence_mode == DivMode::GLM;
  double lam_v = cfg.mu / cfg.rho + cfg.eta;
  double dt = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < m.elem.size(); ++i) {
    Vars Q;
    Q[IW1] = s.w[i].x; Q[IW2] = s.w[i].y;
    Q[IB1] = s.B[i].x; Q[IB2] = s.B[i].y;
    double lc = max_signal_speed(Q, cfg.rho, glm, cfg.c_h);
    double h = m.elem[i].h;
    double denom = lc + 2.0 / h * lam_v;
    if (denom > 0) dt = std::min(dt, cfg.cfl * h / denom);
  }
  if (!std::isfinite(dt)) return cfg.dt_max;
  return dt;
}

}  // namespace mhdfv

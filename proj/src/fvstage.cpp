#include "mhdfv/fvstage.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mhdfv {

double face_pressure(const std::vector<double>& p_vert, const PrimalMesh& m, int f) {
  const Face& F = m.face[f];
  return 0.5 * (p_vert[m.vrep[F.a]] + p_vert[m.vrep[F.b]]);
}

Vars wall_ghost(const Vars& inner, const WallBC& bc, double rho) {
  Vars g = inner;
  g[IW1] = 2 * rho * bc.u.x - inner[IW1];
  g[IW2] = 2 * rho * bc.u.y - inner[IW2];
  if (bc.fix_B) {
    g[IB1] = 2 * bc.B.x - inner[IB1];
    g[IB2] = 2 * bc.B.y - inner[IB2];
  }
  return g;
}

IntermediateState transport_diffusion_step(const State& s, const Equilibrium& e,
                                           const ReconstructionSet& r, const PrimalMesh& m,
                                           const BoundarySet* bc, double dt,
                                           const SchemeConfig& cfg) {
  bool glm = cfg.divergence_mode == DivMode::GLM;
  if (glm && cfg.c_h <= 0) throw std::runtime_error("fvstage: GLM mode needs c_h > 0");
  double half_dt = dt / 2;

  size_t nf = m.face.size();
  // face buffers: state-minus-equilibrium flux differences in the face frame
  std::vector<Vec2> Gm(nf), GB(nf);
  std::vector<double> Gpsi(nf, 0.0), pdiff(nf, 0.0);

  // each face records its use from both sides for the trace evaluations
  std::vector<FaceUse> useL(nf), useR(nf);
  for (size_t i = 0; i < m.elem.size(); ++i)
    for (const FaceUse& fu : m.elem[i].faces)
      (m.face[fu.f].left == int(i) ? useL[fu.f] : useR[fu.f]) = fu;

#pragma omp parallel for schedule(static)
  for (int f = 0; f < int(nf); ++f) {
    const Face& F = m.face[f];
    int i = F.left, j = F.right;
    Vars Qm = boundary_extrapolate(r, e, m, i, useL[f], half_dt);
    Vars Qp;
    // Dissipative fluxes are built from a single shared face gradient whose
    // centre-to-centre component is a compact two-point difference; plain
    // averages of the cell slopes feed a growing grid mode on non-symmetric
    // meshes (anti-diffusive for sawtooth data), and so does a jump penalty
    // on the reconstructed traces. The correction acts on the fluctuation
    // only, so a held equilibrium is untouched.
    Mat2 gu = trace_gradu(r, e, i, f, cfg.rho);
    Mat2 gB = trace_gradB(r, e, i, f);
    if (j >= 0) {
      Qp = boundary_extrapolate(r, e, m, j, useR[f], half_dt);
      gu = (gu + trace_gradu(r, e, j, f, cfg.rho)) * 0.5;
      gB = (gB + trace_gradB(r, e, j, f)) * 0.5;
      Vec2 dvec = m.elem[j].bary + F.shift_right - m.elem[i].bary;
      double dl = norm(dvec);
      Vec2 dh = dvec / dl;
      Vec2 du = ((s.w[j] - e.Q_i[j].w()) - (s.w[i] - e.Q_i[i].w())) / (cfg.rho * dl);
      Vec2 dB = ((s.B[j] - e.Q_i[j].B()) - (s.B[i] - e.Q_i[i].B())) / dl;
      Vec2 cu = du - (gu - e.gradu_f[f]) * dh;
      Vec2 cB = dB - (gB - e.gradB_f[f]) * dh;
      gu(0, 0) += cu.x * dh.x; gu(0, 1) += cu.x * dh.y;
      gu(1, 0) += cu.y * dh.x; gu(1, 1) += cu.y * dh.y;
      gB(0, 0) += cB.x * dh.x; gB(0, 1) += cB.x * dh.y;
      gB(1, 0) += cB.y * dh.x; gB(1, 1) += cB.y * dh.y;
    } else {
      if (!bc) throw std::runtime_error("fvstage: boundary face without boundary conditions");
      const WallBC& wb = bc->face[f];
      Qp = wall_ghost(Qm, wb, cfg.rho);
      // one-sided equivalent of the compact difference: cell average to the
      // prescribed wall value at the face barycenter
      Vec2 dvec = F.bary - m.elem[i].bary;
      double dl = norm(dvec);
      Vec2 dh = dvec / dl;
      Vec2 du = (wb.u - e.Q_f[f].w() / cfg.rho - (s.w[i] - e.Q_i[i].w()) / cfg.rho) / dl;
      Vec2 cu = du - (gu - e.gradu_f[f]) * dh;
      gu(0, 0) += cu.x * dh.x; gu(0, 1) += cu.x * dh.y;
      gu(1, 0) += cu.y * dh.x; gu(1, 1) += cu.y * dh.y;
      if (wb.fix_B) {
        Vec2 dB = (wb.B - e.Q_f[f].B() - (s.B[i] - e.Q_i[i].B())) / dl;
        Vec2 cB = dB - (gB - e.gradB_f[f]) * dh;
        gB(0, 0) += cB.x * dh.x; gB(0, 1) += cB.x * dh.y;
        gB(1, 0) += cB.y * dh.x; gB(1, 1) += cB.y * dh.y;
      }
    }

    FluxPair fc = cfg.flux == FluxType::Rusanov
                      ? rusanov_flux(Qm, Qp, cfg.rho, F.n, glm, cfg.c_h)
                      : ducros_flux(Qm, Qp, cfg.rho, F.n, glm, cfg.c_h);
    FluxPair fce = physical_convective_flux(e.Q_f[f], cfg.rho, F.n, glm, cfg.c_h);
    Vec2 fvm = visc_momentum_flux(cfg.mu, gu, F.n);
    Vec2 fvb = visc_magnetic_flux(cfg.eta, gB, F.n);
    Vec2 fvme = visc_momentum_flux(cfg.mu, e.gradu_f[f], F.n);
    Vec2 fvbe = visc_magnetic_flux(cfg.eta, e.gradB_f[f], F.n);

    Gm[f] = (fc.mom - fce.mom) - (fvm - fvme);
    GB[f] = (fc.mag - fce.mag) - (fvb - fvbe);
    if (glm) Gpsi[f] = fc.glm - fce.glm;
    if (cfg.pressure_correction) pdiff[f] = face_pressure(s.p, m, f) - e.p_f[f];

    if (!std::isfinite(Gm[f].x + Gm[f].y + GB[f].x + GB[f].y + Gpsi[f] + pdiff[f]))
      throw std::runtime_error("fvstage: non-finite flux on face " + std::to_string(f));
  }

  IntermediateState out;
  out.w.resize(m.elem.size());
  out.B.resize(m.elem.size());
  if (glm) out.psi.resize(m.elem.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < int(m.elem.size()); ++i) {
    Vec2 aw{}, aB{};
    double apsi = 0;
    for (const FaceUse& fu : m.elem[i].faces) {
      double sl = fu.sigma * m.face[fu.f].len;
      aw += (Gm[fu.f] + m.face[fu.f].n * pdiff[fu.f]) * sl;
      aB += GB[fu.f] * sl;
      apsi += Gpsi[fu.f] * sl;
    }
    double c = dt / m.elem[i].area;
    out.w[i] = s.w[i] - aw * c;
    out.B[i] = s.B[i] - aB * c;
    if (glm) out.psi[i] = s.psi[i] - apsi * c;
  }
  return out;
}

}  // namespace mhdfv

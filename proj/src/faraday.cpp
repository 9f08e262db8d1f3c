#include "mhdfv/faraday.hpp"

#include <cmath>
#include <stdexcept>

#include "mhdfv/flux.hpp"

namespace mhdfv {

namespace {

// fluctuation polynomial of element i at native offset dx, advanced half_dt
void fluct_at(const ReconstructionSet* r, int i, Vec2 dx, double half_dt, Vec2& du, Vec2& dB,
              double rho) {
  if (!r) {
    du = {0, 0};
    dB = {0, 0};
    return;
  }
  du = {(r->Qp[i][IW1] + dot(r->grad[i][IW1], dx) + r->dtQ[i][IW1] * half_dt) / rho,
        (r->Qp[i][IW2] + dot(r->grad[i][IW2], dx) + r->dtQ[i][IW2] * half_dt) / rho};
  if (r->have_divfree) {
    dB = {r->Bavg[i].x + r->Bslope[i](0, 0) * dx.x + r->Bslope[i](0, 1) * dx.y +
              r->dtQ[i][IB1] * half_dt,
          r->Bavg[i].y + r->Bslope[i](1, 0) * dx.x + r->Bslope[i](1, 1) * dx.y +
              r->dtQ[i][IB2] * half_dt};
  } else {
    dB = {r->Qp[i][IB1] + dot(r->grad[i][IB1], dx) + r->dtQ[i][IB1] * half_dt,
          r->Qp[i][IB2] + dot(r->grad[i][IB2], dx) + r->dtQ[i][IB2] * half_dt};
  }
}

}  // namespace

std::vector<double> vertex_electric_fields(const PrimalMesh& m, const VertexDualSet& vd,
                                           const ReconstructionSet* r, const Equilibrium& e,
                                           const std::vector<Vec2>& cell_w,
                                           const std::vector<Vec2>& cell_B, double half_dt,
                                           const BoundarySet* bc, const SchemeConfig& cfg) {
  std::vector<double> E(vd.vd.size(), 0.0);
  bool glm = cfg.divergence_mode == DivMode::GLM;
#pragma omp parallel for schedule(static)
  for (int v = 0; v < int(vd.vd.size()); ++v) {
    const VertexDual& V = vd.vd[v];
    if (V.ring.empty()) throw std::runtime_error("faraday: vertex without incident elements");
    bool wall = bc && v < int(bc->vert_wall.size()) && bc->vert_wall[v];

    double ideal = 0, loop = 0, stab = 0, smax = 0;
    for (const VDElem& re : V.ring) {
      int i = re.elem;
      // value of the half-step polynomial at the vertex itself
      Vec2 dxv = (V.pos - re.shift) - m.elem[i].bary;
      Vec2 du, dB;
      fluct_at(r, i, dxv, half_dt, du, dB, cfg.rho);
      Vec2 uv = e.u_fn(V.pos) + du;
      Vec2 Bv = e.B_fn(V.pos) + dB;
      if (wall) uv = bc->vert_u[v];
      ideal += cross(uv, Bv);
      stab += re.elen * dot(Bv, re.tstar);

      // resistive loop integral over the dual pieces inside this element
      for (int k = 0; k < 2; ++k) {
        Vec2 xm = re.seg[k].mid;
        Vec2 duq, dBq;
        fluct_at(r, i, (xm - re.shift) - m.elem[i].bary, half_dt, duq, dBq, cfg.rho);
        loop += dot(e.B_fn(xm) + dBq, re.seg[k].dvec);
      }
      for (int k = 0; k < re.n_extra; ++k) {
        Vec2 xm = re.extra[k].mid;
        Vec2 duq, dBq;
        fluct_at(r, i, (xm - re.shift) - m.elem[i].bary, half_dt, duq, dBq, cfg.rho);
        loop += dot(e.B_fn(xm) + dBq, re.extra[k].dvec);
      }

      Vars Q;
      Q[IW1] = cell_w[i].x;
      Q[IW2] = cell_w[i].y;
      Q[IB1] = cell_B[i].x;
      Q[IB2] = cell_B[i].y;
      smax = std::max(smax, max_signal_speed(Q, cfg.rho, glm, cfg.c_h));
    }
    // eta_h = smax |G*| / |dG*|, so the stabilization prefactor reduces
    double eta_h_over_area = smax / V.perim;
    E[v] = -ideal / double(V.ring.size()) + cfg.eta / V.area * loop + eta_h_over_area * stab;
  }
  return E;
}

void update_face_fluxes(std::vector<double>& Bface, const std::vector<double>& Evert,
                        const std::vector<double>& Eref, double dt, const PrimalMesh& m) {
#pragma omp parallel for schedule(static)
  for (int f = 0; f < int(m.face.size()); ++f) {
    const Face& F = m.face[f];
    int va = m.vrep[F.a], vb = m.vrep[F.b];
    double db = (Evert[vb] - Eref[vb]) - (Evert[va] - Eref[va]);
    Bface[f] -= dt / F.len * db;
  }
}

std::vector<double> face_divergence(const std::vector<double>& Bface, const PrimalMesh& m,
                                    double* max_abs) {
  std::vector<double> res(m.elem.size(), 0.0);
  double mx = 0;
  for (size_t i = 0; i < m.elem.size(); ++i) {
    double s = 0;
    for (const FaceUse& fu : m.elem[i].faces) s += fu.sigma * m.face[fu.f].len * Bface[fu.f];
    res[i] = s;
    mx = std::max(mx, std::fabs(s));
  }
  if (max_abs) *max_abs = mx;
  return res;
}

std::vector<double> init_from_potential(const std::function<double(Vec2)>& A3,
                                        const PrimalMesh& m) {
  std::vector<double> Bf(m.face.size());
  for (size_t f = 0; f < m.face.size(); ++f) {
    const Face& F = m.face[f];
    Bf[f] = (A3(m.node[F.b]) - A3(m.node[F.a])) / F.len;
  }
  return Bf;
}

}  // namespace mhdfv

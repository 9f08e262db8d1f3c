#include "mhdfv/recon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mhdfv/flux.hpp"

namespace mhdfv {

std::vector<Vars> fluctuations(const State& s, const Equilibrium& e) {
  std::vector<Vars> qp(s.w.size());
  for (size_t i = 0; i < qp.size(); ++i) {
    qp[i][IW1] = s.w[i].x - e.Q_i[i][IW1];
    qp[i][IW2] = s.w[i].y - e.Q_i[i][IW2];
    qp[i][IB1] = s.B[i].x - e.Q_i[i][IB1];
    qp[i][IB2] = s.B[i].y - e.Q_i[i][IB2];
    if (!s.psi.empty()) qp[i][IPSI] = s.psi[i];  // the equilibrium scalar is zero
  }
  return qp;
}

std::vector<VarsGrad> lsq_gradients(const std::vector<Vars>& Qp, const PrimalMesh& m) {
  std::vector<VarsGrad> out(m.elem.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < int(m.elem.size()); ++i) {
    double axx = 0, axy = 0, ayy = 0;
    Vec2 b[NV] = {};
    for (const FaceUse& fu : m.elem[i].faces) {
      Vec2 dx;
      int j = m.neighbour(i, fu, dx);
      if (j < 0) continue;
      axx += dx.x * dx.x;
      axy += dx.x * dx.y;
      ayy += dx.y * dx.y;
      for (int k = 0; k < NV; ++k) {
        double dq = Qp[j][k] - Qp[i][k];
        b[k] += dx * dq;
      }
    }
    double det = axx * ayy - axy * axy;
    double scale = axx + ayy;
    if (det <= 1e-12 * scale * scale) continue;  // degenerate stencil: keep zero slopes
    for (int k = 0; k < NV; ++k) {
      out[i][k].x = (ayy * b[k].x - axy * b[k].y) / det;
      out[i][k].y = (axx * b[k].y - axy * b[k].x) / det;
    }
  }
  return out;
}

void limit_slopes(const std::vector<Vars>& Qp, const PrimalMesh& m, std::vector<VarsGrad>& grad,
                  bool skip_magnetic) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < int(m.elem.size()); ++i) {
    double qmin[NV], qmax[NV];
    for (int k = 0; k < NV; ++k) qmin[k] = qmax[k] = Qp[i][k];
    for (const FaceUse& fu : m.elem[i].faces) {
      Vec2 dx;
      int j = m.neighbour(i, fu, dx);
      if (j < 0) continue;
      for (int k = 0; k < NV; ++k) {
        qmin[k] = std::min(qmin[k], Qp[j][k]);
        qmax[k] = std::max(qmax[k], Qp[j][k]);
      }
    }
    for (int k = 0; k < NV; ++k) {
      if (skip_magnetic && (k == IB1 || k == IB2)) continue;
      double alpha = 1.0;
      for (const FaceUse& fu : m.elem[i].faces) {
        Vec2 dx = m.face_point(fu) - m.elem[i].bary;
        double d = dot(grad[i][k], dx);
        if (d > 1e-14)
          alpha = std::min(alpha, std::max(0.0, (qmax[k] - Qp[i][k]) / d));
        else if (d < -1e-14)
          alpha = std::min(alpha, std::max(0.0, (qmin[k] - Qp[i][k]) / d));
      }
      grad[i][k] = grad[i][k] * alpha;
    }
  }
}

Vars spatial_trace(const ReconstructionSet& r, const Equilibrium& e, const PrimalMesh& m, int i,
                   const FaceUse& fu) {
  Vec2 dx = m.face_point(fu) - m.elem[i].bary;
  Vars q = e.Q_f[fu.f];
  for (int k = 0; k < NV; ++k) q[k] += r.Qp[i][k] + dot(r.grad[i][k], dx);
  if (r.have_divfree) {
    q[IB1] = e.Q_f[fu.f][IB1] + r.Bavg[i].x + r.Bslope[i](0, 0) * dx.x + r.Bslope[i](0, 1) * dx.y;
    q[IB2] = e.Q_f[fu.f][IB2] + r.Bavg[i].y + r.Bslope[i](1, 0) * dx.x + r.Bslope[i](1, 1) * dx.y;
  }
  return q;
}

Vars boundary_extrapolate(const ReconstructionSet& r, const Equilibrium& e, const PrimalMesh& m,
                          int i, const FaceUse& fu, double half_dt) {
  Vars q = spatial_trace(r, e, m, i, fu);
  for (int k = 0; k < NV; ++k) q[k] += r.dtQ[i][k] * half_dt;
  return q;
}

Mat2 trace_gradu(const ReconstructionSet& r, const Equilibrium& e, int i, int f, double rho) {
  Mat2 g = e.gradu_f[f];
  g(0, 0) += r.grad[i][IW1].x / rho;
  g(0, 1) += r.grad[i][IW1].y / rho;
  g(1, 0) += r.grad[i][IW2].x / rho;
  g(1, 1) += r.grad[i][IW2].y / rho;
  return g;
}

Mat2 trace_gradB(const ReconstructionSet& r, const Equilibrium& e, int i, int f) {
  Mat2 g = e.gradB_f[f];
  if (r.have_divfree) {
    g = g + r.Bslope[i];
  } else {
    g(0, 0) += r.grad[i][IB1].x;
    g(0, 1) += r.grad[i][IB1].y;
    g(1, 0) += r.grad[i][IB2].x;
    g(1, 1) += r.grad[i][IB2].y;
  }
  return g;
}

std::vector<Vars> ck_time_derivative(const State& s, const Equilibrium& e,
                                     const ReconstructionSet& r, const PrimalMesh& m,
                                     const SchemeConfig& cfg) {
  bool glm = cfg.divergence_mode == DivMode::GLM;
  std::vector<Vars> out(m.elem.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < int(m.elem.size()); ++i) {
    Vars acc;
    for (const FaceUse& fu : m.elem[i].faces) {
      const Face& F = m.face[fu.f];
      Vec2 nout = F.n * fu.sigma;
      Vars Qij = spatial_trace(r, e, m, i, fu);
      FluxPair fc = physical_convective_flux(Qij, cfg.rho, nout, glm, cfg.c_h);
      FluxPair fce = physical_convective_flux(e.Q_f[fu.f], cfg.rho, nout, glm, cfg.c_h);
      Vec2 fvm = visc_momentum_flux(cfg.mu, trace_gradu(r, e, i, fu.f, cfg.rho), nout);
      Vec2 fvme = visc_momentum_flux(cfg.mu, e.gradu_f[fu.f], nout);
      Vec2 fvb = visc_magnetic_flux(cfg.eta, trace_gradB(r, e, i, fu.f), nout);
      Vec2 fvbe = visc_magnetic_flux(cfg.eta, e.gradB_f[fu.f], nout);
      // grouped so that identical state/equilibrium terms cancel bitwise
      Vec2 mom = (fc.mom - fce.mom) - (fvm - fvme);
      if (cfg.pressure_correction) {
        double pij = 0.5 * (s.p[m.vrep[F.a]] + s.p[m.vrep[F.b]]);
        mom += nout * (pij - e.p_f[fu.f]);
      }
      Vec2 mag = (fc.mag - fce.mag) - (fvb - fvbe);
      acc[IW1] += F.len * mom.x;
      acc[IW2] += F.len * mom.y;
      acc[IB1] += F.len * mag.x;
      acc[IB2] += F.len * mag.y;
      if (glm) acc[IPSI] += F.len * (fc.glm - fce.glm);
    }
    out[i] = acc * (-1.0 / m.elem[i].area);
  }
  return out;
}

namespace {

// basis {1, x - x_i, y - y_i}; mass matrix by a centroid fan with the
// edge-midpoint rule per triangle, exact for quadratics
Eigen::Matrix3d basis_mass(const PrimalMesh& m, int i) {
  const Element& el = m.elem[i];
  Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
  for (int c = 0; c < el.nv; ++c) {
    Vec2 a = m.node[el.v[c]], b = m.node[el.v[(c + 1) % el.nv]];
    double At = tri_area(el.bary, a, b);
    Vec2 mid[3] = {(el.bary + a) * 0.5, (a + b) * 0.5, (b + el.bary) * 0.5};
    for (const Vec2& x : mid) {
      Vec2 xi = x - el.bary;
      double psi[3] = {1.0, xi.x, xi.y};
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q) M(p, q) += At / 3.0 * psi[p] * psi[q];
    }
  }
  return M;
}

// coefficient order: (a0,a1,a2) for B1, (b0,b1,b2) for B2
Eigen::MatrixXd build_kkt(const PrimalMesh& m, int i, int drop, const Eigen::Matrix3d& M3) {
  const Element& el = m.elem[i];
  int nf = int(el.faces.size());
  int nc = nf;  // 1 divergence + (nf - 1) face rows
  int n = 6 + nc;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  K.block<3, 3>(0, 0) = M3;
  K.block<3, 3>(3, 3) = M3;
  // divergence row: a1 + b2 = 0
  K(6, 1) = 1.0;
  K(6, 5) = 1.0;
  int row = 7;
  for (int lf = 0; lf < nf; ++lf) {
    if (lf == drop) continue;
    const FaceUse& fu = el.faces[lf];
    const Face& F = m.face[fu.f];
    Vec2 xi = m.face_point(fu) - el.bary;
    K(row, 0) = F.n.x;
    K(row, 1) = F.n.x * xi.x;
    K(row, 2) = F.n.x * xi.y;
    K(row, 3) = F.n.y;
    K(row, 4) = F.n.y * xi.x;
    K(row, 5) = F.n.y * xi.y;
    ++row;
  }
  // symmetrize
  K.block(0, 6, 6, nc) = K.block(6, 0, nc, 6).transpose();
  return K;
}

}  // namespace

KKTSet precompute_kkt(const PrimalMesh& m) {
  KKTSet set;
  set.e.resize(m.elem.size());
  for (size_t i = 0; i < m.elem.size(); ++i) {
    ElementKKT& ek = set.e[i];
    ek.M3 = basis_mass(m, int(i));
    int drop = int(m.elem[i].faces.size()) - 1;
    ek.K = build_kkt(m, int(i), drop, ek.M3);
    ek.lu.compute(ek.K);
    double rcond = ek.lu.rcond();
    if (!(rcond > 1e-14))
      throw std::runtime_error("recon: degenerate projection system on element " +
                               std::to_string(i));
  }
  return set;
}

void divfree_project(const PrimalMesh& m, const KKTSet& kkt, int i, const Vec2& avg_in,
                     const Mat2& slope_in, const std::function<double(int)>& flux_of,
                     Vec2& avg_out, Mat2& slope_out, int drop) {
  const Element& el = m.elem[i];
  int nf = int(el.faces.size());
  if (drop < 0) drop = nf - 1;

  // the face fluxes must close: sum of signed outflows vanishes
  double closure = 0, scale = 0;
  for (int lf = 0; lf < nf; ++lf) {
    const FaceUse& fu = el.faces[lf];
    closure += fu.sigma * m.face[fu.f].len * flux_of(lf);
    scale += m.face[fu.f].len * std::fabs(flux_of(lf));
  }
  if (std::fabs(closure) > 1e-8 * std::max(scale, 1e-8))
    throw std::runtime_error("recon: face fluxes violate the divergence identity on element " +
                             std::to_string(i));

  int nc = nf;
  int n = 6 + nc;
  Eigen::VectorXd rhs(n);
  Eigen::Matrix3d M3 = kkt.e[i].M3;
  Eigen::Vector3d c1(avg_in.x, slope_in(0, 0), slope_in(0, 1));
  Eigen::Vector3d c2(avg_in.y, slope_in(1, 0), slope_in(1, 1));
  rhs.segment<3>(0) = M3 * c1;
  rhs.segment<3>(3) = M3 * c2;
  rhs(6) = 0.0;
  int row = 7;
  for (int lf = 0; lf < nf; ++lf) {
    if (lf == drop) continue;
    rhs(row++) = flux_of(lf);
  }

  Eigen::VectorXd sol;
  if (drop == nf - 1) {
    sol = kkt.e[i].lu.solve(rhs);
  } else {
    Eigen::MatrixXd K = build_kkt(m, i, drop, M3);
    sol = K.partialPivLu().solve(rhs);
  }
  avg_out = {sol(0), sol(3)};
  slope_out(0, 0) = sol(1);
  slope_out(0, 1) = sol(2);
  slope_out(1, 0) = sol(4);
  slope_out(1, 1) = sol(5);
}

}  // namespace mhdfv

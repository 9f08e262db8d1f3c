#include "mhdfv/pressure.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mhdfv {

namespace {

void corner_positions(const PrimalMesh& m, int i, Vec2 out[4]) {
  const Element& el = m.elem[i];
  for (int c = 0; c < el.nv; ++c) out[c] = m.node[el.v[c]];
}

// P1 gradients on a triangle: rotate the opposite edge
void tri_grads(const Vec2 p[4], double area, Vec2 g[4]) {
  for (int k = 0; k < 3; ++k) {
    Vec2 e = p[(k + 2) % 3] - p[(k + 1) % 3];
    g[k] = Vec2{-e.y, e.x} / (2 * area);
  }
}

// bilinear shape gradients at a reference point; returns det J
double quad_grads(const Vec2 p[4], double xi, double et, Vec2 g[4]) {
  double dxi[4] = {-(1 - et), (1 - et), (1 + et), -(1 + et)};
  double det_[4] = {-(1 - xi), -(1 + xi), (1 + xi), (1 - xi)};
  Vec2 Jx{0, 0}, Jy{0, 0};  // columns d x / d xi, d x / d eta
  for (int k = 0; k < 4; ++k) {
    Jx += p[k] * (0.25 * dxi[k]);
    Jy += p[k] * (0.25 * det_[k]);
  }
  double detJ = Jx.x * Jy.y - Jy.x * Jx.y;
  if (std::fabs(detJ) < 1e-300) throw std::runtime_error("pressure: degenerate quad");
  for (int k = 0; k < 4; ++k) {
    double a = 0.25 * dxi[k], b = 0.25 * det_[k];
    // J^{-T} (a, b)
    g[k] = Vec2{(Jy.y * a - Jx.y * b) / detJ, (-Jy.x * a + Jx.x * b) / detJ};
  }
  return detJ;
}

// invert the bilinear map by Newton iteration from the cell center
void quad_inv_map(const Vec2 p[4], Vec2 x, double& xi, double& et) {
  xi = 0;
  et = 0;
  for (int it = 0; it < 12; ++it) {
    double N[4] = {0.25 * (1 - xi) * (1 - et), 0.25 * (1 + xi) * (1 - et),
                   0.25 * (1 + xi) * (1 + et), 0.25 * (1 - xi) * (1 + et)};
    Vec2 r{-x.x, -x.y};
    for (int k = 0; k < 4; ++k) r += p[k] * N[k];
    if (norm(r) < 1e-14) break;
    double dxi[4] = {-(1 - et), (1 - et), (1 + et), -(1 + et)};
    double det_[4] = {-(1 - xi), -(1 + xi), (1 + xi), (1 - xi)};
    Vec2 Jx{0, 0}, Jy{0, 0};
    for (int k = 0; k < 4; ++k) {
      Jx += p[k] * (0.25 * dxi[k]);
      Jy += p[k] * (0.25 * det_[k]);
    }
    double detJ = Jx.x * Jy.y - Jy.x * Jx.y;
    xi -= (Jy.y * r.x - Jy.x * r.y) / detJ;
    et -= (-Jx.y * r.x + Jx.x * r.y) / detJ;
  }
}

// basis gradients of element i at physical point x (native frame)
void grads_at(const PrimalMesh& m, int i, Vec2 x, Vec2 g[4]) {
  Vec2 p[4];
  corner_positions(m, i, p);
  if (m.elem[i].nv == 3) {
    tri_grads(p, m.elem[i].area, g);
  } else {
    double xi, et;
    quad_inv_map(p, x, xi, et);
    quad_grads(p, xi, et, g);
  }
}

}  // namespace

void PoissonSystem::apply(const std::vector<double>& v, std::vector<double>& out) const {
  out.assign(m->n_vert, 0.0);
#pragma omp parallel for schedule(static)
  for (int k = 0; k < m->n_vert; ++k) {
    double acc = 0;
    for (const VertexUse& vu : m->vert_use[k]) {
      const Element& el = m->elem[vu.elem];
      const auto& L = local[vu.elem];
      for (int c = 0; c < el.nv; ++c)
        acc += L[vu.corner * 4 + c] * v[m->vrep[el.v[c]]];
    }
    out[k] = acc;
  }
}

PoissonSystem assemble_stiffness(const PrimalMesh& m) {
  PoissonSystem sys;
  sys.m = &m;
  sys.local.resize(m.elem.size());
  for (size_t i = 0; i < m.elem.size(); ++i) {
    auto& L = sys.local[i];
    L.fill(0.0);
    Vec2 p[4];
    corner_positions(m, int(i), p);
    if (m.elem[i].nv == 3) {
      Vec2 g[4];
      tri_grads(p, m.elem[i].area, g);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) L[a * 4 + b] = m.elem[i].area * dot(g[a], g[b]);
    } else {
      const double q = 1.0 / std::sqrt(3.0);
      for (double xi : {-q, q})
        for (double et : {-q, q}) {
          Vec2 g[4];
          double detJ = quad_grads(p, xi, et, g);
          for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) L[a * 4 + b] += detJ * dot(g[a], g[b]);
        }
    }
  }
  sys.lumped = lumped_vertex_measures(m);
  return sys;
}

namespace {

// dual-cell centroid of face fu.f, expressed in the coordinate frame of
// element i (periodic copies of the far element are shifted accordingly)
Vec2 dual_centroid_in(const PrimalMesh& m, const DualMesh& d, int i, const FaceUse& fu) {
  const Face& F = m.face[fu.f];
  Vec2 na = m.node[F.a] + fu.off, nb = m.node[F.b] + fu.off;
  Vec2 ci = (m.elem[i].bary + na + nb) / 3.0;
  if (F.boundary()) return ci;
  int j = (F.left == i) ? F.right : F.left;
  Vec2 offj{0, 0};
  for (const FaceUse& fj : m.elem[j].faces)
    if (fj.f == fu.f) {
      offj = fj.off;
      break;
    }
  Vec2 cj = (m.elem[j].bary + (fu.off - offj) + na + nb) / 3.0;
  return (ci * d.sub(m, i, fu) + cj * d.sub(m, j, fu)) * (1.0 / d.vol[fu.f]);
}

}  // namespace

std::vector<double> assemble_rhs(const std::vector<Vec2>& w_dual, const Equilibrium& e,
                                 const PrimalMesh& m, const DualMesh& d, double dt) {
  std::vector<Vec2> v(m.face.size());
  for (size_t f = 0; f < m.face.size(); ++f) v[f] = w_dual[f] - e.w_dual[f];

  // slopes of the excess per dual cell, from the surrounding dual averages;
  // the quadrature below then integrates a linear field per dual cell, which
  // keeps the weak divergence consistent on stars without mirror symmetry
  std::vector<Mat2> G(m.face.size());
#pragma omp parallel for schedule(static)
  for (int f = 0; f < int(m.face.size()); ++f) {
    const Face& F = m.face[f];
    double axx = 0, axy = 0, ayy = 0;
    Vec2 bx{0, 0}, by{0, 0};
    // frame of the left element; far-side neighbours get shifted into it
    Vec2 offL{0, 0}, offR{0, 0};
    for (const FaceUse& fl : m.elem[F.left].faces)
      if (fl.f == f) offL = fl.off;
    Vec2 c0 = dual_centroid_in(m, d, F.left, FaceUse{f, 1.0, offL});
    auto take = [&](int el, Vec2 shift) {
      for (const FaceUse& fu : m.elem[el].faces) {
        if (fu.f == f) continue;
        Vec2 dx = dual_centroid_in(m, d, el, fu) + shift - c0;
        Vec2 dq = v[fu.f] - v[f];
        axx += dx.x * dx.x;
        axy += dx.x * dx.y;
        ayy += dx.y * dx.y;
        bx += dx * dq.x;
        by += dx * dq.y;
      }
    };
    take(F.left, Vec2{0, 0});
    if (!F.boundary()) {
      for (const FaceUse& fr : m.elem[F.right].faces)
        if (fr.f == f) offR = fr.off;
      take(F.right, offL - offR);
    }
    double det = axx * ayy - axy * axy;
    double scale = axx + ayy;
    if (det <= 1e-12 * scale * scale) continue;
    G[f](0, 0) = (ayy * bx.x - axy * bx.y) / det;
    G[f](0, 1) = (axx * bx.y - axy * bx.x) / det;
    G[f](1, 0) = (ayy * by.x - axy * by.y) / det;
    G[f](1, 1) = (axx * by.y - axy * by.x) / det;
  }

  std::vector<double> b(m.n_vert, 0.0);
  for (size_t i = 0; i < m.elem.size(); ++i) {
    const Element& el = m.elem[i];
    for (const FaceUse& fu : el.faces) {
      const Face& F = m.face[fu.f];
      Vec2 vf = v[fu.f];
      const Mat2& Gf = G[fu.f];
      bool flat = vf.x == 0.0 && vf.y == 0.0 && Gf(0, 0) == 0.0 && Gf(0, 1) == 0.0 &&
                  Gf(1, 0) == 0.0 && Gf(1, 1) == 0.0;
      if (flat) continue;
      Vec2 na = m.node[F.a] + fu.off, nb = m.node[F.b] + fu.off;
      Vec2 xc = (el.bary + na + nb) / 3.0;
      Vec2 dx = xc - dual_centroid_in(m, d, int(i), fu);
      Vec2 val{vf.x + Gf(0, 0) * dx.x + Gf(0, 1) * dx.y,
               vf.y + Gf(1, 0) * dx.x + Gf(1, 1) * dx.y};
      double vol = d.sub(m, int(i), fu);
      Vec2 g[4];
      grads_at(m, int(i), xc, g);
      for (int c = 0; c < el.nv; ++c) b[m.vrep[el.v[c]]] += vol * dot(val, g[c]);
    }
  }
  for (double& x : b) x /= dt;
  return b;
}

namespace {
void remove_mean(std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  s /= double(v.size());
  for (double& x : v) x -= s;
}
}  // namespace

int solve_cg(const PoissonSystem& sys, const std::vector<double>& b, std::vector<double>& x,
             double tol, int maxiter) {
  size_t n = b.size();
  x.assign(n, 0.0);
  std::vector<double> r = b;
  remove_mean(r);
  double bnorm = 0;
  for (double v : r) bnorm += v * v;
  bnorm = std::sqrt(bnorm);
  if (bnorm == 0.0) return 0;

  std::vector<double> p = r, Ap(n);
  double rr = bnorm * bnorm;
  for (int it = 1; it <= maxiter; ++it) {
    sys.apply(p, Ap);
    double pAp = 0;
    for (size_t k = 0; k < n; ++k) pAp += p[k] * Ap[k];
    double alpha = rr / pAp;
    for (size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * Ap[k];
    }
    remove_mean(r);
    double rr2 = 0;
    for (double v : r) rr2 += v * v;
    if (std::sqrt(rr2) <= tol * bnorm) {
      remove_mean(x);
      return it;
    }
    double beta = rr2 / rr;
    rr = rr2;
    for (size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
  }
  throw std::runtime_error("pressure: CG stalled at relative residual " +
                           std::to_string(std::sqrt(rr) / bnorm));
}

void post_projection(std::vector<Vec2>& w_primal, std::vector<Vec2>& w_dual,
                     const std::vector<double>& dp, double dt, const PrimalMesh& m,
                     const DualMesh& d) {
  std::vector<Vec2> acc(m.face.size(), Vec2{0, 0});
  std::vector<Vec2> grad_primal(m.elem.size(), Vec2{0, 0});
  for (size_t i = 0; i < m.elem.size(); ++i) {
    const Element& el = m.elem[i];
    for (const FaceUse& fu : el.faces) {
      const Face& F = m.face[fu.f];
      Vec2 na = m.node[F.a] + fu.off, nb = m.node[F.b] + fu.off;
      Vec2 xc = (el.bary + na + nb) / 3.0;
      Vec2 g[4];
      grads_at(m, int(i), xc, g);
      Vec2 gp{0, 0};
      for (int c = 0; c < el.nv; ++c) gp += g[c] * dp[m.vrep[el.v[c]]];
      // the gradient of the increment is linear per sub-triangle, so the
      // centroid value integrates it exactly on both control volumes
      acc[fu.f] += gp * d.sub(m, int(i), fu);
      grad_primal[i] += gp * d.sub(m, int(i), fu);
    }
    grad_primal[i] = grad_primal[i] / el.area;
  }
  std::vector<Vec2> grad_dual(m.face.size());
  for (size_t f = 0; f < m.face.size(); ++f) grad_dual[f] = acc[f] / d.vol[f];
  for (size_t f = 0; f < m.face.size(); ++f) w_dual[f] -= grad_dual[f] * dt;
  for (size_t i = 0; i < m.elem.size(); ++i) w_primal[i] -= grad_primal[i] * dt;
}

void initial_divergence_cleanup(State& s, const Equilibrium& e, const PrimalMesh& m,
                                const DualMesh& d, const PoissonSystem& sys,
                                const SchemeConfig& cfg) {
  std::vector<Vec2> we(m.elem.size());
  for (size_t i = 0; i < m.elem.size(); ++i) we[i] = {e.Q_i[i][IW1], e.Q_i[i][IW2]};
  const double dt = 1e-7;
  std::vector<Vec2> w_dual;
  std::vector<double> dp;
  for (int cycle = 0; cycle < 5; ++cycle) {
    w_dual = delta_momentum_transfer(s.w, we, e.w_dual, m, d);
    std::vector<double> b = assemble_rhs(w_dual, e, m, d, dt);
    solve_cg(sys, b, dp, cfg.cg_tol, cfg.cg_maxiter);
    post_projection(s.w, w_dual, dp, dt, m, d);
  }
  s.wdual = w_dual;
}

}  // namespace mhdfv

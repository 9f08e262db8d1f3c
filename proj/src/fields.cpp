#include "mhdfv/fields.hpp"

#include <cmath>

namespace mhdfv {

Equilibrium make_zero_equilibrium(const PrimalMesh& m) {
  Equilibrium e;
  e.zero = true;
  e.u_fn = [](Vec2) { return Vec2{}; };
  e.B_fn = [](Vec2) { return Vec2{}; };
  e.p_fn = [](Vec2) { return 0.0; };
  e.Q_i.assign(m.elem.size(), {});
  e.Q_f.assign(m.face.size(), {});
  e.gradu_f.assign(m.face.size(), {});
  e.gradB_f.assign(m.face.size(), {});
  e.p_f.assign(m.face.size(), 0.0);
  e.p_v.assign(m.n_vert, 0.0);
  e.Bface.assign(m.face.size(), 0.0);
  e.w_dual.assign(m.face.size(), {});
  e.Evert.assign(m.n_vert, 0.0);
  return e;
}

Equilibrium make_equilibrium(const PrimalMesh& m, std::function<Vec2(Vec2)> u_fn,
                             std::function<Vec2(Vec2)> B_fn, std::function<double(Vec2)> p_fn,
                             std::function<double(Vec2)> A3_fn, double mu, double eta,
                             double rho) {
  Equilibrium e;
  e.zero = false;
  e.u_fn = std::move(u_fn);
  e.B_fn = std::move(B_fn);
  e.p_fn = std::move(p_fn);
  e.A3_fn = std::move(A3_fn);
  e.mu = mu;
  e.eta = eta;
  e.rho = rho;

  e.Q_i.resize(m.elem.size());
  for (size_t i = 0; i < m.elem.size(); ++i) {
    Vec2 w = e.u_fn(m.elem[i].bary) * rho, B = e.B_fn(m.elem[i].bary);
    e.Q_i[i][IW1] = w.x; e.Q_i[i][IW2] = w.y;
    e.Q_i[i][IB1] = B.x; e.Q_i[i][IB2] = B.y;
  }

  e.p_v.resize(m.n_vert);
  for (int v = 0; v < m.n_vert; ++v) e.p_v[v] = e.p_fn(m.vert_pos[v]);

  e.Q_f.resize(m.face.size());
  e.gradu_f.resize(m.face.size());
  e.gradB_f.resize(m.face.size());
  e.p_f.resize(m.face.size());
  e.Bface.resize(m.face.size());
  e.w_dual.resize(m.face.size());
  for (size_t f = 0; f < m.face.size(); ++f) {
    const Face& F = m.face[f];
    Vec2 x = F.bary;
    Vec2 w = e.u_fn(x) * rho, B = e.B_fn(x);
    e.Q_f[f][IW1] = w.x; e.Q_f[f][IW2] = w.y;
    e.Q_f[f][IB1] = B.x; e.Q_f[f][IB2] = B.y;
    // central differences; analytic gradients are rarely available
    double h = m.elem[F.left].h, eps = 1e-3 * h;
    for (int c = 0; c < 2; ++c) {
      Vec2 dx = (c == 0) ? Vec2{eps, 0} : Vec2{0, eps};
      Vec2 du = (e.u_fn(x + dx) - e.u_fn(x - dx)) / (2 * eps);
      Vec2 dB = (e.B_fn(x + dx) - e.B_fn(x - dx)) / (2 * eps);
      e.gradu_f[f](0, c) = du.x;
      e.gradu_f[f](1, c) = du.y;
      e.gradB_f[f](0, c) = dB.x;
      e.gradB_f[f](1, c) = dB.y;
    }
    e.p_f[f] = 0.5 * (e.p_v[m.vrep[F.a]] + e.p_v[m.vrep[F.b]]);
    if (e.A3_fn)
      e.Bface[f] = (e.A3_fn(m.node[F.b]) - e.A3_fn(m.node[F.a])) / F.len;
    else
      e.Bface[f] = dot(B, F.n);
    e.w_dual[f] = w;
  }
  e.Evert.assign(m.n_vert, 0.0);  // filled once the vertex duals exist
  return e;
}

std::vector<Vec2> delta_momentum_transfer(const std::vector<Vec2>& w_tilde,
                                          const std::vector<Vec2>& w_n,
                                          const std::vector<Vec2>& w_n_dual, const PrimalMesh& m,
                                          const DualMesh& d) {
  std::vector<Vec2> delta(w_tilde.size());
  for (size_t i = 0; i < delta.size(); ++i) delta[i] = w_tilde[i] - w_n[i];

  // least-squares slopes of the increment, so each half-cell contribution can
  // be shifted from the element barycenter to its own centroid; the plain
  // area-weighted average loses an order wherever the two half cells are not
  // mirror images, which a triangle next to a quadrilateral never is
  std::vector<Mat2> slope(delta.size());
#pragma omp parallel for schedule(static)
  for (int i = 0; i < int(delta.size()); ++i) {
    double axx = 0, axy = 0, ayy = 0;
    Vec2 bx{0, 0}, by{0, 0};
    for (const FaceUse& fu : m.elem[i].faces) {
      Vec2 dx;
      int j = m.neighbour(i, fu, dx);
      if (j < 0) continue;
      axx += dx.x * dx.x;
      axy += dx.x * dx.y;
      ayy += dx.y * dx.y;
      Vec2 dq = delta[j] - delta[i];
      bx += dx * dq.x;
      by += dx * dq.y;
    }
    double det = axx * ayy - axy * axy;
    double scale = axx + ayy;
    if (det <= 1e-12 * scale * scale) continue;
    slope[i](0, 0) = (ayy * bx.x - axy * bx.y) / det;
    slope[i](0, 1) = (axx * bx.y - axy * bx.x) / det;
    slope[i](1, 0) = (ayy * by.x - axy * by.y) / det;
    slope[i](1, 1) = (axx * by.y - axy * by.x) / det;
  }

  auto shifted = [&](int i, const FaceUse& fu) {
    const Face& F = m.face[fu.f];
    Vec2 c = (m.elem[i].bary + m.node[F.a] + fu.off + m.node[F.b] + fu.off) / 3.0 -
             m.elem[i].bary;
    return delta[i] + Vec2{slope[i](0, 0) * c.x + slope[i](0, 1) * c.y,
                           slope[i](1, 0) * c.x + slope[i](1, 1) * c.y};
  };

  std::vector<Vec2> out(m.face.size(), Vec2{0, 0});
  for (size_t i = 0; i < m.elem.size(); ++i)
    for (const FaceUse& fu : m.elem[i].faces)
      out[fu.f] += shifted(int(i), fu) * (d.sub(m, int(i), fu) / d.vol[fu.f]);
  for (size_t f = 0; f < out.size(); ++f) out[f] += w_n_dual[f];
  return out;
}

double l2_error_cells(const std::vector<double>& q, const std::function<double(Vec2)>& exact,
                      const PrimalMesh& m) {
  double s = 0;
  for (size_t i = 0; i < m.elem.size(); ++i) {
    double d = q[i] - exact(m.elem[i].bary);
    s += m.elem[i].area * d * d;
  }
  return std::sqrt(s);
}

std::vector<double> lumped_vertex_measures(const PrimalMesh& m) {
  std::vector<double> mk(m.n_vert, 0.0);
  for (const Element& el : m.elem)
    for (int c = 0; c < el.nv; ++c) mk[m.vrep[el.v[c]]] += el.area / el.nv;
  return mk;
}

double l2_error_vertices(const std::vector<double>& p, const std::function<double(Vec2)>& exact,
                         const PrimalMesh& m, bool align_means) {
  std::vector<double> mk = lumped_vertex_measures(m);
  double mtot = 0, mean_num = 0, mean_ex = 0;
  std::vector<double> ex(m.n_vert);
  for (int v = 0; v < m.n_vert; ++v) {
    ex[v] = exact(m.vert_pos[v]);
    mtot += mk[v];
    mean_num += mk[v] * p[v];
    mean_ex += mk[v] * ex[v];
  }
  double shift = align_means ? (mean_ex - mean_num) / mtot : 0.0;
  double s = 0;
  for (int v = 0; v < m.n_vert; ++v) {
    double d = p[v] + shift - ex[v];
    s += mk[v] * d * d;
  }
  return std::sqrt(s);
}

}  // namespace mhdfv

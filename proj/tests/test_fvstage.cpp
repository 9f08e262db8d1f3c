#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mhdfv/fvstage.hpp"
#include "mhdfv/meshgen.hpp"

using namespace mhdfv;

namespace {
ReconstructionSet full_recon(const State& s, const Equilibrium& e, const PrimalMesh& m,
                             const SchemeConfig& cfg) {
  ReconstructionSet r;
  r.Qp = fluctuations(s, e);
  r.grad = lsq_gradients(r.Qp, m);
  if (cfg.limiter == LimiterType::BarthJespersen)
    limit_slopes(r.Qp, m, r.grad, cfg.divergence_mode == DivMode::CT);
  r.dtQ = ck_time_derivative(s, e, r, m, cfg);
  return r;
}
}  // namespace

TEST_CASE("face pressure is the endpoint mean") {
  PrimalMesh m = build_primal(generate_mesh(MeshKind::cartesian, 2, 2, {0, 0}, {1, 1}));
  std::vector<double> p(m.n_vert, 5.0);
  for (size_t f = 0; f < m.face.size(); ++f) CHECK(face_pressure(p, m, int(f)) == 5.0);
  const Face& F = m.face[0];
  p.assign(m.n_vert, 0.0);
  p[m.vrep[F.a]] = 1.0;
  p[m.vrep[F.b]] = 3.0;
  CHECK(face_pressure(p, m, 0) == 2.0);
}

TEST_CASE("wall ghost states") {
  Vars q;
  q[IW1] = 0.4;
  q[IW2] = -0.7;
  q[IB1] = 0.2;
  q[IB2] = 0.9;
  q[IPSI] = 0.1;
  WallBC noslip;
  Vars g = wall_ghost(q, noslip, 1.0);
  CHECK(g[IW1] == -0.4);
  CHECK(g[IW2] == 0.7);
  CHECK(g[IB1] == 0.2);  // zero-gradient magnetic wall
  CHECK(g[IPSI] == 0.1);

  WallBC lid;
  lid.u = {1, 0};
  Vars gl = wall_ghost(q, lid, 2.0);
  CHECK(0.5 * (gl[IW1] + q[IW1]) == doctest::Approx(2.0).epsilon(1e-15));  // rho * u_lid

  WallBC cond;
  cond.fix_B = true;
  cond.B = {0.5, 0};
  Vars gc = wall_ghost(q, cond, 1.0);
  CHECK(0.5 * (gc[IB1] + q[IB1]) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(0.5 * (gc[IB2] + q[IB2]) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("equilibrium state is a fixed point to a few ulps") {
  PrimalMesh m = build_primal(
      generate_mesh(MeshKind::mixed, 12, 12, {0, 0}, {2 * M_PI, 2 * M_PI}, true, true));
  auto u = [](Vec2 x) { return Vec2{std::sin(x.x) * std::cos(x.y), -std::cos(x.x) * std::sin(x.y)}; };
  auto B = [](Vec2) { return Vec2{0, 0}; };
  auto p = [](Vec2 x) { return 0.25 * (std::cos(2 * x.x) + std::cos(2 * x.y)); };
  Equilibrium e = make_equilibrium(m, u, B, p, nullptr, 0, 0, 1.0);

  State s;
  s.w.resize(m.elem.size());
  s.B.resize(m.elem.size());
  for (size_t i = 0; i < m.elem.size(); ++i) {
    s.w[i] = {e.Q_i[i][IW1], e.Q_i[i][IW2]};
    s.B[i] = {e.Q_i[i][IB1], e.Q_i[i][IB2]};
  }
  s.p = e.p_v;

  for (FluxType fx : {FluxType::Rusanov, FluxType::Ducros}) {
    SchemeConfig cfg;
    cfg.flux = fx;
    cfg.well_balanced = true;
    ReconstructionSet r = full_recon(s, e, m, cfg);
    IntermediateState is = transport_diffusion_step(s, e, r, m, nullptr, 1e-2, cfg);
    for (size_t i = 0; i < m.elem.size(); ++i) {
      CHECK(std::fabs(is.w[i].x - s.w[i].x) <= 5e-16 * (1 + std::fabs(s.w[i].x)));
      CHECK(std::fabs(is.w[i].y - s.w[i].y) <= 5e-16 * (1 + std::fabs(s.w[i].y)));
      CHECK(is.B[i].x == s.B[i].x);
      CHECK(is.B[i].y == s.B[i].y);
    }
  }
}

TEST_CASE("uniform state with constant pressure does not move") {
  PrimalMesh m =
      build_primal(generate_mesh(MeshKind::skewed, 8, 8, {0, 0}, {1, 1}, true, true));
  Equilibrium e = make_zero_equilibrium(m);
  State s;
  s.w.assign(m.elem.size(), Vec2{0.3, -0.8});
  s.B.assign(m.elem.size(), Vec2{0.6, 0.1});
  s.p.assign(m.n_vert, 2.5);
  SchemeConfig cfg;
  ReconstructionSet r = full_recon(s, e, m, cfg);
  IntermediateState is = transport_diffusion_step(s, e, r, m, nullptr, 5e-3, cfg);
  for (size_t i = 0; i < m.elem.size(); ++i) {
    CHECK(std::fabs(is.w[i].x - 0.3) <= 1e-14);
    CHECK(std::fabs(is.w[i].y + 0.8) <= 1e-14);
    CHECK(std::fabs(is.B[i].x - 0.6) <= 1e-14);
    CHECK(std::fabs(is.B[i].y - 0.1) <= 1e-14);
  }
}

TEST_CASE("discrete conservation on periodic meshes") {
  PrimalMesh m = build_primal(
      generate_mesh(MeshKind::mixed, 10, 10, {0, 0}, {2 * M_PI, 2 * M_PI}, true, true));
  Equilibrium e = make_zero_equilibrium(m);
  State s;
  s.w.resize(m.elem.size());
  s.B.resize(m.elem.size());
  for (size_t i = 0; i < m.elem.size(); ++i) {
    Vec2 x = m.elem[i].bary;
    s.w[i] = {std::sin(x.x), std::cos(x.y)};
    s.B[i] = {std::cos(x.y), std::sin(x.x)};
  }
  s.p.assign(m.n_vert, 0.0);
  SchemeConfig cfg;
  cfg.pressure_correction = false;
  cfg.mu = 1e-3;
  cfg.eta = 1e-3;
  ReconstructionSet r = full_recon(s, e, m, cfg);
  IntermediateState is = transport_diffusion_step(s, e, r, m, nullptr, 2e-3, cfg);
  Vec2 w0{}, w1{}, B0{}, B1{};
  double scale = 0;
  for (size_t i = 0; i < m.elem.size(); ++i) {
    w0 += s.w[i] * m.elem[i].area;
    w1 += is.w[i] * m.elem[i].area;
    B0 += s.B[i] * m.elem[i].area;
    B1 += is.B[i] * m.elem[i].area;
    scale += m.elem[i].area * (norm(s.w[i]) + norm(s.B[i]));
  }
  CHECK(norm(w1 - w0) <= 1e-12 * scale);
  CHECK(norm(B1 - B0) <= 1e-12 * scale);
}

TEST_CASE("GLM scalar stays zero for uniform fields and rejects bad c_h") {
  PrimalMesh m =
      build_primal(generate_mesh(MeshKind::cartesian, 6, 6, {0, 0}, {1, 1}, true, true));
  Equilibrium e = make_zero_equilibrium(m);
  State s;
  s.w.assign(m.elem.size(), Vec2{0.2, 0.1});
  s.B.assign(m.elem.size(), Vec2{1.0, -0.5});
  s.psi.assign(m.elem.size(), 0.0);
  s.p.assign(m.n_vert, 0.0);
  SchemeConfig cfg;
  cfg.divergence_mode = DivMode::GLM;
  cfg.c_h = 2.0;
  cfg.pressure_correction = false;
  ReconstructionSet r = full_recon(s, e, m, cfg);
  IntermediateState is = transport_diffusion_step(s, e, r, m, nullptr, 1e-3, cfg);
  for (double ps : is.psi) CHECK(std::fabs(ps) <= 1e-14);

  SchemeConfig bad = cfg;
  bad.c_h = 0;
  CHECK_THROWS(transport_diffusion_step(s, e, r, m, nullptr, 1e-3, bad));
}

TEST_CASE("GLM pulse propagates at roughly the cleaning speed") {
  // thin periodic strip; a B1 bump splits into psi pulses moving at +-c_h
  int nx = 96;
  double W = 2 * M_PI, H = 2 * M_PI * 2.0 / nx;
  PrimalMesh m = build_primal(generate_mesh(MeshKind::cartesian, nx, 2, {0, 0}, {W, H}, true, true));
  Equilibrium e = make_zero_equilibrium(m);
  State s;
  s.w.assign(m.elem.size(), Vec2{0, 0});
  s.B.resize(m.elem.size());
  s.psi.assign(m.elem.size(), 0.0);
  for (size_t i = 0; i < m.elem.size(); ++i) {
    double x = m.elem[i].bary.x;
    s.B[i] = {std::exp(-8.0 * (x - M_PI) * (x - M_PI)), 0};
  }
  s.p.assign(m.n_vert, 0.0);
  SchemeConfig cfg;
  cfg.divergence_mode = DivMode::GLM;
  cfg.c_h = 2.0;
  cfg.pressure_correction = false;
  double t = 0, t_end = 0.5;
  while (t < t_end) {
    double dt = std::min(compute_dt(s, m, cfg), t_end - t);
    ReconstructionSet r = full_recon(s, e, m, cfg);
    IntermediateState is = transport_diffusion_step(s, e, r, m, nullptr, dt, cfg);
    s.w = is.w;
    s.B = is.B;
    s.psi = is.psi;
    t += dt;
  }
  double best_pos = 0, best_neg = 0;
  double max_psi = 0, min_psi = 0;
  for (size_t i = 0; i < m.elem.size(); ++i) {
    if (s.psi[i] > max_psi) { max_psi = s.psi[i]; best_pos = m.elem[i].bary.x; }
    if (s.psi[i] < min_psi) { min_psi = s.psi[i]; best_neg = m.elem[i].bary.x; }
  }
  CHECK(max_psi > 1e-3);
  CHECK(min_psi < -1e-3);
  double d1 = std::fabs(std::fabs(best_pos - M_PI) - cfg.c_h * t_end);
  double d2 = std::fabs(std::fabs(best_neg - M_PI) - cfg.c_h * t_end);
  CHECK(d1 <= 0.1 * cfg.c_h * t_end);
  CHECK(d2 <= 0.1 * cfg.c_h * t_end);
}

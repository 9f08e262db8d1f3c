#pragma once
#include "mhdfv/fields.hpp"

namespace mhdfv {

// velocity condition on one side of the domain box
enum class SideBC { periodic, velocity_dirichlet, no_slip, moving_lid };

// side indices: x-low, x-high, y-low, y-high
constexpr int SIDE_XLO = 0, SIDE_XHI = 1, SIDE_YLO = 2, SIDE_YHI = 3;

struct Benchmark {
  std::string name;
  Vec2 lo{0, 0}, hi{1, 1};

  // initial data evaluators; A3 (vector potential z-component) may be empty,
  // in which case the face fluxes are sampled from B0 directly
  std::function<Vec2(Vec2)> u0, B0;
  std::function<double(Vec2)> p0, A3;

  // prescribed stationary solution for the well-balanced scheme; set only
  // where the case has one, otherwise the zero equilibrium is used
  bool analytic_equilibrium = false;
  std::function<Vec2(Vec2)> ue, Be;
  std::function<double(Vec2)> pe, A3e;

  SideBC side[4] = {SideBC::periodic, SideBC::periodic, SideBC::periodic, SideBC::periodic};
  bool conducting = false;   // wall faces pin the normal magnetic flux to Bwall.n
  bool dirichlet_B = false;  // Dirichlet walls also prescribe B (diffusion tests)
  Vec2 Bwall{0, 0};
  Vec2 lid_u{0, 0};

  double mu = 0, eta = 0, rho = 1;
  double v0 = 0;  // background drift of the vortex cases
  double t_end = 1;
  double cfl = 0.45;

  // exact solutions at time t where available; empty otherwise
  std::function<Vec2(Vec2, double)> exact_u, exact_B;
  std::function<double(Vec2, double)> exact_p;

  bool periodic_x() const { return side[SIDE_XLO] == SideBC::periodic; }
  bool periodic_y() const { return side[SIDE_YLO] == SideBC::periodic; }
};

// optional overrides for the per-case defaults
struct BenchmarkParams {
  double mu = -1, eta = -1;  // negative: keep the case default
  double v0 = -1;
  bool have_B0 = false;
  Vec2 B0{0, 0};  // background field of the conducting-wall cavity
};

// constructors for: taylor_green, gresho_vortex, mhd_vortex, stokes_first,
// current_sheet, field_loop, lid_cavity, mhd_lid_cavity, double_shear_layer,
// orszag_tang; throws on any other name
Benchmark make_benchmark(const std::string& name, const BenchmarkParams& params = {});

// wall velocities per boundary face and merged vertex; where the moving lid
// meets a side wall the vertex takes the side-wall value
BoundarySet make_boundary_set(const Benchmark& b, const PrimalMesh& m);

// cell averages, face fluxes (from the potential when one is given), vertex
// pressures and the GLM scalar, all sampled from the initial evaluators
State make_initial_state(const Benchmark& b, const PrimalMesh& m);

// the case equilibrium when well-balancing is on and one exists, otherwise
// the zero equilibrium
Equilibrium benchmark_equilibrium(const Benchmark& b, const PrimalMesh& m, bool well_balanced);

// scheme parameters implied by the case (viscosity, resistivity, CFL, end time)
SchemeConfig benchmark_config(const Benchmark& b);

// strip grid for the shear-diffusion tests: structured quadrilaterals on the
// left half of the box, triangles on the right half
MeshInput mixed_strip_mesh(int nx, int ny, Vec2 lo, Vec2 hi, bool periodic_y);

}  // namespace mhdfv

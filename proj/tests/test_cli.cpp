#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mhdfv/io.hpp"
#include "mhdfv/meshgen.hpp"

using namespace mhdfv;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  REQUIRE(bool(f));
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string tmpfile_with(const std::string& name, const std::string& text) {
  std::string path = "/tmp/mhdfv_test_" + name;
  std::ofstream f(path);
  f << text;
  return path;
}

}  // namespace

TEST_CASE("config parsing: values, comments, unknown keys, type errors") {
  RunConfig rc = parse_config_text(
      "# a comment\n"
      "benchmark = taylor_green\n"
      "mesh_gen = mixed  # trailing comment\n"
      "nx = 40\n"
      "t_end = 0.1\n"
      "dt_fixed = 2.5e-3\n"
      "cut = y 3.1415 /tmp/cut_a.csv\n");
  CHECK(rc.benchmark == "taylor_green");
  CHECK(rc.mesh_gen == "mixed");
  CHECK(rc.nx == 40);
  CHECK(rc.scheme.t_end == 0.1);
  CHECK(rc.scheme.dt_fixed == 2.5e-3);
  CHECK(rc.present.count("dt_fixed") == 1);
  CHECK(rc.present.count("cfl") == 0);
  REQUIRE(rc.cuts.size() == 1);
  CHECK(rc.cuts[0].axis == 'y');
  CHECK(rc.cuts[0].coord == doctest::Approx(3.1415));
  CHECK(rc.cuts[0].path == "/tmp/cut_a.csv");

  CHECK_THROWS_WITH_AS(parse_config_text("benchmark = taylor_green\nmesh_gen = mixed\nflux = hllc\n"),
                       doctest::Contains("unknown flux"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("benchmark = t\nmesh_gen = mixed\nwarp = 9\n"),
                       doctest::Contains("unknown key"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("benchmark = t\nmesh_gen = mixed\ncfl = fast\n"),
                       doctest::Contains("bad number"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_config_text("benchmark = t\nmesh_gen = mixed\nnx = 2.5\n"),
                       doctest::Contains("integer"), std::runtime_error);
  CHECK_THROWS_AS(parse_config_text("mesh_gen = mixed\nnx = 4\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config_text("benchmark = taylor_green\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_config_text("benchmark = t\nmesh_gen = mixed\ncut = z 0 p\n"),
                  std::runtime_error);
}

TEST_CASE("config overrides only touch the keys that were present") {
  Benchmark b = make_benchmark("taylor_green");
  SchemeConfig cfg = benchmark_config(b);
  double mu0 = cfg.mu;
  RunConfig rc = parse_config_text(
      "benchmark = taylor_green\nmesh_gen = mixed\nnx = 8\ndt_fixed = 2.5e-3\n");
  apply_overrides(cfg, rc);
  CHECK(cfg.dt_fixed == 2.5e-3);
  CHECK(cfg.mu == mu0);  // untouched default
}

TEST_CASE("mesh selection: stored file beats generator, nx validated") {
  Benchmark b = make_benchmark("taylor_green");
  MeshInput gen = generate_mesh(MeshKind::triangular, 4, 4, b.lo, b.hi, true, true);
  std::string mf = "/tmp/mhdfv_test_mesh.txt";
  write_mesh_input(mf, gen);

  RunConfig rc = parse_config_text("benchmark = taylor_green\nmesh = " + mf +
                                   "\nmesh_gen = mixed\nnx = 12\n");
  MeshInput in = mesh_from_config(rc, b);
  CHECK(in.elements.size() == gen.elements.size());

  RunConfig rc2 = parse_config_text("benchmark = taylor_green\nmesh_gen = mixed\nnx = 1\n");
  CHECK_THROWS_AS(mesh_from_config(rc2, b), std::runtime_error);

  // generator path: domain defaults to what the benchmark prescribes
  RunConfig rc3 = parse_config_text("benchmark = taylor_green\nmesh_gen = cartesian\nnx = 6\n");
  PrimalMesh m = build_primal(mesh_from_config(rc3, b));
  CHECK(m.elem.size() == 36);
  double xmax = 0;
  for (const Vec2& x : m.node) xmax = std::max(xmax, x.x);
  CHECK(xmax == doctest::Approx(b.hi.x));
}

TEST_CASE("minimal run produces a final state and the expected stage sequence") {
  RunConfig rc = parse_config_text(
      "benchmark = mhd_vortex\nmesh_gen = mixed\nnx = 8\nt_end = 0.01\ndt_fixed = 0.005\n");
  SimulationProduct pr = run_simulation(rc);
  CHECK(pr.state.t == doctest::Approx(0.01));
  CHECK(pr.report.steps.size() == 2);
  std::vector<std::string> ct = {"project", "reconstruct", "transport",
                                 "faraday", "poisson",     "post"};
  CHECK(pr.trace == ct);
  CHECK(pr.report.steps.back().div_residual <= 1e-12);

  RunConfig rg = parse_config_text(
      "benchmark = mhd_vortex\nmesh_gen = mixed\nnx = 8\nt_end = 0.01\ndt_fixed = 0.005\n"
      "divergence_mode = glm\n");
  SimulationProduct pg = run_simulation(rg);
  std::vector<std::string> glm = {"reconstruct", "transport", "poisson", "post"};
  CHECK(pg.trace == glm);
}

TEST_CASE("run writes the configured VTK snapshots and cut files") {
  std::remove("/tmp/mhdfv_t_00000.vtk");
  std::remove("/tmp/mhdfv_t_final.vtk");
  RunConfig rc = parse_config_text(
      "benchmark = taylor_green\nmesh_gen = mixed\nnx = 6\nt_end = 0.004\ndt_fixed = 0.002\n"
      "output_every = 1\noutput_prefix = /tmp/mhdfv_t\n"
      "cut = x 3.14159 /tmp/mhdfv_cut.csv\n");
  SimulationProduct pr = run_simulation(rc);

  std::string vtk = slurp("/tmp/mhdfv_t_final.vtk");
  std::string want = "CELLS " + std::to_string(pr.mesh.elem.size()) + " ";
  CHECK(vtk.find(want) != std::string::npos);
  CHECK(vtk.find("POINTS " + std::to_string(pr.mesh.node.size())) != std::string::npos);
  CHECK(slurp("/tmp/mhdfv_t_00000.vtk").find("VECTORS u double") != std::string::npos);

  std::string cut = slurp("/tmp/mhdfv_cut.csv");
  CHECK(cut.rfind("coord,u_t,B_t\n", 0) == 0);
  // one sample per cell column along the line, sorted by coordinate
  std::stringstream ss(cut);
  std::string line;
  std::getline(ss, line);
  double prev = -1e300;
  int rows = 0;
  while (std::getline(ss, line)) {
    double c = std::stod(line.substr(0, line.find(',')));
    CHECK(c >= prev);
    prev = c;
    ++rows;
  }
  CHECK(rows >= 6);
}

TEST_CASE("cut writer on an empty state emits only the header") {
  PrimalMesh m = build_primal(generate_mesh(MeshKind::cartesian, 3, 3, {0, 0}, {1, 1}));
  State s;
  write_cut_csv(s, m, 'x', 0.5, "/tmp/mhdfv_cut_empty.csv");
  CHECK(slurp("/tmp/mhdfv_cut_empty.csv") == "coord,u_t,B_t\n");
}

TEST_CASE("error table writer leaves the order column empty on the first mesh") {
  std::vector<ErrorRow> rows = {{"M_20", "p", 0.125, std::nan("")},
                                {"M_40", "p", 0.03125, 2.0}};
  write_error_csv(rows, "/tmp/mhdfv_err.csv");
  CHECK(slurp("/tmp/mhdfv_err.csv") ==
        "mesh,variable,L2,order\nM_20,p,0.125,\nM_40,p,0.03125,2\n");
}

TEST_CASE("single threaded reruns are bit identical") {
  std::string cfg =
      "benchmark = mhd_vortex\nmesh_gen = mixed\nnx = 8\nt_end = 0.01\ndt_fixed = 0.005\n"
      "cut = x 5.0 %s\n";
  char a[256], b[256];
  std::snprintf(a, sizeof(a), cfg.c_str(), "/tmp/mhdfv_det_a.csv");
  std::snprintf(b, sizeof(b), cfg.c_str(), "/tmp/mhdfv_det_b.csv");
  run_simulation(parse_config_text(a));
  run_simulation(parse_config_text(b));
  CHECK(slurp("/tmp/mhdfv_det_a.csv") == slurp("/tmp/mhdfv_det_b.csv"));
  CHECK(slurp("/tmp/mhdfv_det_a.csv").size() > 100);
}

TEST_CASE("well balanced run holds the equilibrium through the full driver") {
  RunConfig rc = parse_config_text(
      "benchmark = mhd_vortex\nmesh_gen = mixed\nnx = 8\nt_end = 0.05\ndt_fixed = 0.005\n"
      "well_balanced = true\n");
  SimulationProduct pr = run_simulation(rc);
  Benchmark b = make_benchmark("mhd_vortex");
  double dw = 0, dB = 0;
  for (size_t i = 0; i < pr.mesh.elem.size(); ++i) {
    Vec2 x = pr.mesh.elem[i].bary;
    dw = std::max(dw, norm(pr.state.w[i] - b.exact_u(x, 0) * pr.state.rho));
    dB = std::max(dB, norm(pr.state.B[i] - b.exact_B(x, 0)));
  }
  CHECK(dw <= 1e-11);
  CHECK(dB <= 1e-11);
}

TEST_CASE("config file loader reports unreadable paths") {
  CHECK_THROWS_AS(parse_config("/tmp/definitely_not_here_9321.cfg"), std::runtime_error);
  std::string p = tmpfile_with("ok.cfg", "benchmark = taylor_green\nmesh_gen = mixed\nnx = 4\n");
  RunConfig rc = parse_config(p);
  CHECK(rc.nx == 4);
}

TEST_CASE("unknown benchmark fails before any heavy setup") {
  RunConfig rc = parse_config_text("benchmark = warp_drive\nmesh_gen = mixed\nnx = 4\n");
  CHECK_THROWS_AS(run_simulation(rc), std::runtime_error);
}

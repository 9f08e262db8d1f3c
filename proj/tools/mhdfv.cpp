// command line front end: run a configured simulation, generate meshes, or
// automate a mesh-refinement error study
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mhdfv/io.hpp"
#include "mhdfv/meshgen.hpp"

using namespace mhdfv;

namespace {

int cmd_run(const std::string& config, int threads) {
  if (threads > 0) omp_set_num_threads(threads);
  RunConfig rc = parse_config(config);
  SimulationProduct p = run_simulation(rc);
  double div = p.report.steps.empty() ? 0.0 : p.report.steps.back().div_residual;
  std::printf("benchmark %s: %zu steps to t=%g, div residual %.3e\n", rc.benchmark.c_str(),
              p.report.steps.size(), p.state.t, div);
  for (const auto& [stage, sec] : p.report.stage_seconds)
    std::printf("  %-12s %8.3f s\n", stage.c_str(), sec);
  return 0;
}

int cmd_mesh(const std::string& gen, int nx, int ny, std::vector<double> dom, bool px, bool py,
             const std::string& out) {
  Vec2 lo{dom[0], dom[1]}, hi{dom[2], dom[3]};
  MeshInput in = (gen == "strip") ? mixed_strip_mesh(nx, ny, lo, hi, py)
                                  : generate_mesh(mesh_kind_from_string(gen), nx, ny, lo, hi,
                                                  px, py);
  write_mesh_input(out, in);
  PrimalMesh m = build_primal(in);  // validates what we just wrote
  std::printf("%s: %zu elements, %zu nodes -> %s\n", gen.c_str(), m.elem.size(), m.node.size(),
              out.c_str());
  return 0;
}

// refinement study on the generated mixed meshes, with the per-resolution
// fixed time steps used for the published vortex error tables
int cmd_convergence(const std::string& name, const std::vector<int>& meshes,
                    const std::string& out) {
  Benchmark probe = make_benchmark(name);
  bool with_B = bool(probe.exact_B);
  std::vector<std::string> vars = {"p", "u1", "u2"};
  if (with_B) {
    vars.push_back("B1");
    vars.push_back("B2");
  }
  std::vector<ErrorRow> rows;
  std::vector<double> prev;
  double prev_nx = 0;
  for (int nx : meshes) {
    Benchmark b = make_benchmark(name);
    PrimalMesh m =
        build_primal(generate_mesh(MeshKind::mixed, nx, nx, b.lo, b.hi, b.periodic_x(),
                                   b.periodic_y()));
    SchemeConfig cfg = benchmark_config(b);
    if (name == "taylor_green")
      cfg.dt_fixed = 0.1 / nx;
    else if (name == "mhd_vortex")
      cfg.dt_fixed = 0.05 / nx;
    Solver sol(b, m, cfg);
    sol.run();
    const State& s = sol.state();

    std::vector<double> q(m.elem.size());
    auto cell_err = [&](auto pick, auto exact) {
      for (size_t i = 0; i < q.size(); ++i) q[i] = pick(i);
      return l2_error_cells(q, exact, m);
    };
    std::vector<double> errs;
    errs.push_back(
        l2_error_vertices(s.p, [&](Vec2 x) { return b.exact_p(x, s.t); }, m, true));
    errs.push_back(cell_err([&](size_t i) { return s.w[i].x; },
                            [&](Vec2 x) { return b.exact_u(x, s.t).x; }));
    errs.push_back(cell_err([&](size_t i) { return s.w[i].y; },
                            [&](Vec2 x) { return b.exact_u(x, s.t).y; }));
    if (with_B) {
      errs.push_back(cell_err([&](size_t i) { return s.B[i].x; },
                              [&](Vec2 x) { return b.exact_B(x, s.t).x; }));
      errs.push_back(cell_err([&](size_t i) { return s.B[i].y; },
                              [&](Vec2 x) { return b.exact_B(x, s.t).y; }));
    }
    std::string mesh_name = "M_" + std::to_string(nx);
    for (size_t k = 0; k < vars.size(); ++k) {
      double order = prev.empty() ? std::nan("")
                                  : std::log(prev[k] / errs[k]) / std::log(double(nx) / prev_nx);
      rows.push_back({mesh_name, vars[k], errs[k], order});
      std::printf("%-6s %-3s L2=%.5e", mesh_name.c_str(), vars[k].c_str(), errs[k]);
      if (!prev.empty()) std::printf("  order %.2f", order);
      std::printf("\n");
    }
    prev = errs;
    prev_nx = nx;
  }
  write_error_csv(rows, out);
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"incompressible viscous/resistive MHD solver"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "advance a configured simulation to t_end");
  std::string config;
  int threads = 0;
  run->add_option("--config", config, "configuration file")->required();
  run->add_option("--threads", threads, "cap OpenMP parallelism (1 = deterministic)");

  auto* mesh = app.add_subcommand("mesh", "generate a mesh file");
  std::string gen = "mixed", mesh_out = "mesh.txt";
  int nx = 40, ny = 0;
  std::vector<double> dom = {0, 0, 1, 1};
  bool px = false, py = false;
  mesh->add_option("--gen", gen, "cartesian | skewed | mixed | triangular | strip")->required();
  mesh->add_option("--nx", nx, "divisions along x")->required();
  mesh->add_option("--ny", ny, "divisions along y (default: nx)");
  mesh->add_option("--domain", dom, "x0,y0,x1,y1")->delimiter(',')->expected(4);
  mesh->add_flag("--periodic-x", px, "pair the x boundaries");
  mesh->add_flag("--periodic-y", py, "pair the y boundaries");
  mesh->add_option("--out", mesh_out, "output path");

  auto* conv = app.add_subcommand("convergence", "mesh refinement error study");
  std::string cname;
  std::vector<int> cmeshes = {20, 40, 60, 80};
  std::string cout_path = "convergence.csv";
  conv->add_option("--benchmark", cname, "case name")->required();
  conv->add_option("--meshes", cmeshes, "resolutions, e.g. 20,40,60,80")->delimiter(',');
  conv->add_option("--out", cout_path, "error table path");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(config, threads);
    if (*mesh) return cmd_mesh(gen, nx, ny > 0 ? ny : nx, dom, px, py, mesh_out);
    if (*conv) return cmd_convergence(cname, cmeshes, cout_path);
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 1;
  }
  return 0;
}

#include "mhdfv/io.hpp"

#include <algorithm>

#include "mhdfv/meshgen.hpp"
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mhdfv {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const std::string& key, const std::string& v) {
  size_t pos = 0;
  double x;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    throw std::runtime_error("config: bad number for " + key + ": '" + v + "'");
  }
  if (pos != v.size()) throw std::runtime_error("config: bad number for " + key + ": '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  double x = to_double(key, v);
  int i = int(x);
  if (double(i) != x) throw std::runtime_error("config: " + key + " must be an integer");
  return i;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw std::runtime_error("config: " + key + " must be true or false, got '" + v + "'");
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<double> split_doubles(const std::string& key, const std::string& v, size_t want) {
  std::vector<double> out;
  std::string cur;
  std::stringstream ss(v);
  while (std::getline(ss, cur, ',')) out.push_back(to_double(key, trim(cur)));
  if (out.size() != want)
    throw std::runtime_error("config: " + key + " expects " + std::to_string(want) + " numbers");
  return out;
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  RunConfig rc;
  std::stringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (val.empty())
      throw std::runtime_error("config: empty value for " + key);

    SchemeConfig& c = rc.scheme;
    if (key == "benchmark") {
      rc.benchmark = val;
    } else if (key == "mesh") {
      rc.mesh_file = val;
    } else if (key == "mesh_gen") {
      rc.mesh_gen = val;
    } else if (key == "nx") {
      rc.nx = to_int(key, val);
    } else if (key == "ny") {
      rc.ny = to_int(key, val);
    } else if (key == "domain") {
      auto d = split_doubles(key, val, 4);
      rc.dom_lo = {d[0], d[1]};
      rc.dom_hi = {d[2], d[3]};
      rc.have_domain = true;
    } else if (key == "flux") {
      if (val == "rusanov")
        c.flux = FluxType::Rusanov;
      else if (val == "ducros")
        c.flux = FluxType::Ducros;
      else
        throw std::runtime_error("config: unknown flux '" + val + "'");
      rc.present.insert(key);
    } else if (key == "well_balanced") {
      c.well_balanced = to_bool(key, val);
      rc.present.insert(key);
    } else if (key == "divergence_mode") {
      if (val == "ct")
        c.divergence_mode = DivMode::CT;
      else if (val == "glm")
        c.divergence_mode = DivMode::GLM;
      else if (val == "none")
        c.divergence_mode = DivMode::none;
      else
        throw std::runtime_error("config: unknown divergence_mode '" + val + "'");
      rc.present.insert(key);
    } else if (key == "pressure_correction") {
      c.pressure_correction = to_bool(key, val);
      rc.present.insert(key);
    } else if (key == "limiter") {
      if (val == "none")
        c.limiter = LimiterType::none;
      else if (val == "barth_jespersen")
        c.limiter = LimiterType::BarthJespersen;
      else
        throw std::runtime_error("config: unknown limiter '" + val + "'");
      rc.present.insert(key);
    } else if (key == "cfl") {
      c.cfl = to_double(key, val);
      rc.present.insert(key);
    } else if (key == "dt_fixed") {
      c.dt_fixed = to_double(key, val);
      rc.present.insert(key);
    } else if (key == "dt_max") {
      c.dt_max = to_double(key, val);
      rc.present.insert(key);
    } else if (key == "mu") {
      c.mu = to_double(key, val);
      rc.params.mu = c.mu;
      rc.present.insert(key);
    } else if (key == "eta") {
      c.eta = to_double(key, val);
      rc.params.eta = c.eta;
      rc.present.insert(key);
    } else if (key == "rho") {
      c.rho = to_double(key, val);
      rc.present.insert(key);
    } else if (key == "c_h") {
      c.c_h = to_double(key, val);
      rc.present.insert(key);
    } else if (key == "t_end") {
      c.t_end = to_double(key, val);
      rc.present.insert(key);
    } else if (key == "cg_tol") {
      c.cg_tol = to_double(key, val);
      rc.present.insert(key);
    } else if (key == "cg_maxiter") {
      c.cg_maxiter = to_int(key, val);
      rc.present.insert(key);
    } else if (key == "output_every") {
      c.output_every = to_int(key, val);
      rc.present.insert(key);
    } else if (key == "v0") {
      rc.params.v0 = to_double(key, val);
    } else if (key == "B0") {
      auto d = split_doubles(key, val, 2);
      rc.params.have_B0 = true;
      rc.params.B0 = {d[0], d[1]};
    } else if (key == "cut") {
      std::stringstream cs(val);
      std::string axis, coord, path;
      if (!(cs >> axis >> coord >> path) || axis.size() != 1 ||
          (axis[0] != 'x' && axis[0] != 'y'))
        throw std::runtime_error("config: cut expects 'x|y coordinate path'");
      rc.cuts.push_back({axis[0], to_double(key, coord), path});
    } else if (key == "output_prefix") {
      rc.output_prefix = val;
    } else {
      throw std::runtime_error("config: unknown key '" + key + "'");
    }
  }

  if (rc.benchmark.empty()) throw std::runtime_error("config: missing mandatory key benchmark");
  if (rc.mesh_file.empty() && rc.mesh_gen.empty())
    throw std::runtime_error("config: need either mesh or mesh_gen");
  return rc;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("config: cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

void apply_overrides(SchemeConfig& cfg, const RunConfig& rc) {
  const SchemeConfig& c = rc.scheme;
  auto has = [&](const char* k) { return rc.present.count(k) != 0; };
  if (has("flux")) cfg.flux = c.flux;
  if (has("well_balanced")) cfg.well_balanced = c.well_balanced;
  if (has("divergence_mode")) cfg.divergence_mode = c.divergence_mode;
  if (has("pressure_correction")) cfg.pressure_correction = c.pressure_correction;
  if (has("limiter")) cfg.limiter = c.limiter;
  if (has("cfl")) cfg.cfl = c.cfl;
  if (has("dt_fixed")) cfg.dt_fixed = c.dt_fixed;
  if (has("dt_max")) cfg.dt_max = c.dt_max;
  if (has("mu")) cfg.mu = c.mu;
  if (has("eta")) cfg.eta = c.eta;
  if (has("rho")) cfg.rho = c.rho;
  if (has("c_h")) cfg.c_h = c.c_h;
  if (has("t_end")) cfg.t_end = c.t_end;
  if (has("cg_tol")) cfg.cg_tol = c.cg_tol;
  if (has("cg_maxiter")) cfg.cg_maxiter = c.cg_maxiter;
  if (has("output_every")) cfg.output_every = c.output_every;
}

MeshInput mesh_from_config(const RunConfig& rc, const Benchmark& b) {
  if (!rc.mesh_file.empty()) return read_mesh_input(rc.mesh_file);
  if (rc.nx < 2) throw std::runtime_error("config: mesh_gen needs nx >= 2");
  int nx = rc.nx, ny = rc.ny > 0 ? rc.ny : rc.nx;
  Vec2 lo = rc.have_domain ? rc.dom_lo : b.lo;
  Vec2 hi = rc.have_domain ? rc.dom_hi : b.hi;
  if (rc.mesh_gen == "strip") return mixed_strip_mesh(nx, ny, lo, hi, b.periodic_y());
  return generate_mesh(mesh_kind_from_string(rc.mesh_gen), nx, ny, lo, hi, b.periodic_x(),
                       b.periodic_y());
}

SimulationProduct run_simulation(const RunConfig& rc) {
  Benchmark b = make_benchmark(rc.benchmark, rc.params);
  SimulationProduct out;
  out.mesh = build_primal(mesh_from_config(rc, b));
  SchemeConfig cfg = benchmark_config(b);
  apply_overrides(cfg, rc);

  Solver sol(b, out.mesh, cfg);
  auto snapshot = [&](int step) {
    if (rc.output_prefix.empty()) return;
    char tag[32];
    std::snprintf(tag, sizeof(tag), "_%05d.vtk", step);
    write_vtk(sol.state(), out.mesh, rc.output_prefix + tag);
  };
  int step = 0;
  if (cfg.output_every > 0) snapshot(0);
  while (sol.next_dt() > 0) {
    sol.step();
    ++step;
    if (cfg.output_every > 0 && step % cfg.output_every == 0) snapshot(step);
  }
  if (!rc.output_prefix.empty()) write_vtk(sol.state(), out.mesh, rc.output_prefix + "_final.vtk");
  for (const CutSpec& c : rc.cuts)
    write_cut_csv(sol.state(), out.mesh, c.axis, c.coord, c.path);

  out.state = sol.state();
  out.report = sol.report();
  out.trace = sol.stage_trace();
  out.scheme = sol.config();
  return out;
}

void write_vtk(const State& s, const PrimalMesh& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "# vtk DataFile Version 3.0\n";
  f << "incompressible MHD fields\n";
  f << "ASCII\nDATASET UNSTRUCTURED_GRID\n";
  f << "POINTS " << m.node.size() << " double\n";
  for (const Vec2& x : m.node) f << fmt17(x.x) << " " << fmt17(x.y) << " 0\n";
  size_t list = 0;
  for (const Element& e : m.elem) list += 1 + e.nv;
  f << "CELLS " << m.elem.size() << " " << list << "\n";
  for (const Element& e : m.elem) {
    f << e.nv;
    for (int k = 0; k < e.nv; ++k) f << " " << e.v[k];
    f << "\n";
  }
  f << "CELL_TYPES " << m.elem.size() << "\n";
  for (const Element& e : m.elem) f << (e.nv == 3 ? 5 : 9) << "\n";

  f << "CELL_DATA " << m.elem.size() << "\n";
  f << "VECTORS u double\n";
  for (size_t i = 0; i < m.elem.size(); ++i)
    f << fmt17(s.w[i].x / s.rho) << " " << fmt17(s.w[i].y / s.rho) << " 0\n";
  f << "VECTORS B double\n";
  for (size_t i = 0; i < m.elem.size(); ++i)
    f << fmt17(s.B[i].x) << " " << fmt17(s.B[i].y) << " 0\n";
  f << "SCALARS psi double\nLOOKUP_TABLE default\n";
  for (size_t i = 0; i < m.elem.size(); ++i)
    f << fmt17(s.psi.empty() ? 0.0 : s.psi[i]) << "\n";

  f << "POINT_DATA " << m.node.size() << "\n";
  f << "SCALARS p double\nLOOKUP_TABLE default\n";
  for (size_t n = 0; n < m.node.size(); ++n) f << fmt17(s.p[m.vrep[n]]) << "\n";
  if (!f) throw std::runtime_error("write failed for " + path);
}

void write_cut_csv(const State& s, const PrimalMesh& m, char axis, double coord,
                   const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "coord,u_t,B_t\n";
  if (s.w.empty()) return;

  // nearest row of cells transverse to the sampling axis
  double dmin = 1e300;
  auto transverse = [&](int i) {
    return axis == 'x' ? m.elem[i].bary.y - coord : m.elem[i].bary.x - coord;
  };
  for (size_t i = 0; i < m.elem.size(); ++i)
    dmin = std::min(dmin, std::fabs(transverse(int(i))));
  std::vector<int> row;
  for (size_t i = 0; i < m.elem.size(); ++i)
    if (std::fabs(transverse(int(i))) <= dmin + 0.45 * m.elem[i].h) row.push_back(int(i));
  std::sort(row.begin(), row.end(), [&](int a, int b) {
    double ca = axis == 'x' ? m.elem[a].bary.x : m.elem[a].bary.y;
    double cb = axis == 'x' ? m.elem[b].bary.x : m.elem[b].bary.y;
    return ca < cb;
  });
  for (int i : row) {
    double c = axis == 'x' ? m.elem[i].bary.x : m.elem[i].bary.y;
    double ut = axis == 'x' ? s.w[i].y / s.rho : s.w[i].x / s.rho;
    double bt = s.B.empty() ? 0.0 : (axis == 'x' ? s.B[i].y : s.B[i].x);
    f << fmt17(c) << "," << fmt17(ut) << "," << fmt17(bt) << "\n";
  }
  if (!f) throw std::runtime_error("write failed for " + path);
}

void write_error_csv(const std::vector<ErrorRow>& rows, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << "mesh,variable,L2,order\n";
  for (const ErrorRow& r : rows) {
    f << r.mesh << "," << r.variable << "," << fmt17(r.l2) << ",";
    if (!std::isnan(r.order)) f << fmt17(r.order);
    f << "\n";
  }
  if (!f) throw std::runtime_error("write failed for " + path);
}

}  // namespace mhdfv

#pragma once
#include <set>
#include <string>

#include "mhdfv/cases.hpp"
#include "mhdfv/driver.hpp"

namespace mhdfv {

// one requested 1D sample line: axis 'x' varies x at y = coord (and vice
// versa); the transverse velocity and magnetic components are written out
struct CutSpec {
  char axis = 'x';
  double coord = 0;
  std::string path;
};

struct RunConfig {
  std::string benchmark;
  BenchmarkParams params;

  std::string mesh_file;  // either a stored mesh ...
  std::string mesh_gen;   // ... or a generator kind (incl. "strip")
  int nx = 0, ny = 0;
  bool have_domain = false;
  Vec2 dom_lo{0, 0}, dom_hi{1, 1};

  SchemeConfig scheme;            // values for the keys present in the file
  std::set<std::string> present;  // which scheme keys were given explicitly

  std::vector<CutSpec> cuts;
  std::string output_prefix;  // empty: no field output files
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

// mesh source selection: a stored file wins over a generator; the domain and
// the periodic pairing default to what the chosen benchmark needs
MeshInput mesh_from_config(const RunConfig& rc, const Benchmark& b);

struct SimulationProduct {
  PrimalMesh mesh;
  State state;
  RunReport report;
  std::vector<std::string> trace;  // stage names of the last executed step
  SchemeConfig scheme;             // the effective configuration
};

// full run: build everything from the config, advance to t_end, write the
// configured VTK snapshots and cut files; stage errors propagate with the
// stage name and step index attached
SimulationProduct run_simulation(const RunConfig& rc);

// overwrite only the fields whose keys appeared in the file, so the case
// defaults survive for everything else
void apply_overrides(SchemeConfig& cfg, const RunConfig& rc);

void write_vtk(const State& s, const PrimalMesh& m, const std::string& path);

void write_cut_csv(const State& s, const PrimalMesh& m, char axis, double coord,
                   const std::string& path);

struct ErrorRow {
  std::string mesh, variable;
  double l2 = 0;
  double order = 0;  // NaN: first mesh of a series, column left empty
};

void write_error_csv(const std::vector<ErrorRow>& rows, const std::string& path);

}  // namespace mhdfv

#pragma once
#include <map>

#include "mhdfv/cases.hpp"
#include "mhdfv/faraday.hpp"
#include "mhdfv/fvstage.hpp"
#include "mhdfv/pressure.hpp"
#include "mhdfv/recon.hpp"

namespace mhdfv {

struct StepDiagnostics {
  double t = 0;       // time reached after the step
  double dt = 0;
  double div_residual = 0;  // max element residual of the face fluxes
  int cg_iters = 0;
};

struct RunReport {
  std::vector<StepDiagnostics> steps;
  std::map<std::string, double> stage_seconds;
};

// full time loop: reconstruction, explicit transport-diffusion, magnetic
// face-flux evolution (CT) or cleaning scalar (GLM), pressure projection
class Solver {
 public:
  Solver(const Benchmark& b, const PrimalMesh& m, const SchemeConfig& cfg);

  void step();
  int run();  // advance to t_end, returns number of steps taken

  double next_dt() const;
  double divergence_residual() const;

  State& state() { return s_; }
  const State& state() const { return s_; }
  const Equilibrium& equilibrium() const { return e_; }
  const SchemeConfig& config() const { return cfg_; }
  const PrimalMesh& mesh() const { return m_; }
  const DualMesh& dual() const { return d_; }
  const RunReport& report() const { return rep_; }
  const std::vector<std::string>& stage_trace() const { return trace_; }
  const BoundarySet* boundaries() const { return has_bc_ ? &bc_ : nullptr; }

 private:
  template <class Fn>
  void stage(const char* name, Fn&& fn);

  Benchmark b_;
  const PrimalMesh& m_;
  SchemeConfig cfg_;
  DualMesh d_;
  VertexDualSet vd_;
  KKTSet kkt_;
  PoissonSystem sys_;
  BoundarySet bc_;
  bool has_bc_ = false;
  Equilibrium e_;
  State s_;
  std::vector<double> Eref_;
  RunReport rep_;
  std::vector<std::string> trace_;
};

}  // namespace mhdfv

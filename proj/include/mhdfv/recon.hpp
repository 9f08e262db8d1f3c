#pragma once
#include <Eigen/Dense>

#include "mhdfv/fields.hpp"

namespace mhdfv {

// Piecewise linear space-time data for one step, stored as fluctuations
// around the (possibly zero) prescribed equilibrium.
struct ReconstructionSet {
  std::vector<Vars> Qp;        // cell fluctuation averages
  std::vector<VarsGrad> grad;  // limited least-squares slopes
  std::vector<Vars> dtQ;       // predictor time derivatives
  // exactly divergence-free magnetic representation (CT mode): replaces the
  // IB1/IB2 rows of Qp/grad wherever the magnetic field is evaluated
  std::vector<Vec2> Bavg;
  std::vector<Mat2> Bslope;  // trace-free
  bool have_divfree = false;
};

std::vector<Vars> fluctuations(const State& s, const Equilibrium& e);

// 2x2 normal equations over the face-neighbour stencil; collinear or
// undersized stencils fall back to a zero slope
std::vector<VarsGrad> lsq_gradients(const std::vector<Vars>& Qp, const PrimalMesh& m);

// Barth-Jespersen, scalar component-wise; with skip_magnetic the IB1/IB2
// slopes are left alone (they come from the constrained projection)
void limit_slopes(const std::vector<Vars>& Qp, const PrimalMesh& m, std::vector<VarsGrad>& grad,
                  bool skip_magnetic);

// in-element value at the face barycenter, equilibrium plus fluctuation
Vars spatial_trace(const ReconstructionSet& r, const Equilibrium& e, const PrimalMesh& m, int i,
                   const FaceUse& fu);
// same, advanced by half_dt through the predictor derivative
Vars boundary_extrapolate(const ReconstructionSet& r, const Equilibrium& e, const PrimalMesh& m,
                          int i, const FaceUse& fu, double half_dt);

// in-element gradients at the face: equilibrium part plus fluctuation slopes
Mat2 trace_gradu(const ReconstructionSet& r, const Equilibrium& e, int i, int f, double rho);
Mat2 trace_gradB(const ReconstructionSet& r, const Equilibrium& e, int i, int f);

std::vector<Vars> ck_time_derivative(const State& s, const Equilibrium& e,
                                     const ReconstructionSet& r, const PrimalMesh& m,
                                     const SchemeConfig& cfg);

// per-element saddle-point system of the constrained magnetic projection:
// 6 modal coefficients, one pointwise-divergence row, N_f - 1 face-flux rows
struct ElementKKT {
  Eigen::MatrixXd K;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  Eigen::Matrix3d M3;  // basis mass matrix about the element barycenter
};

struct KKTSet {
  std::vector<ElementKKT> e;
};

KKTSet precompute_kkt(const PrimalMesh& m);

// minimize the L2 distance to (avg_in, slope_in) subject to zero divergence
// and the face-flux averages flux_of(local face index); drop < 0 omits the
// last face of the element, any other value selects the omitted constraint
void divfree_project(const PrimalMesh& m, const KKTSet& kkt, int i, const Vec2& avg_in,
                     const Mat2& slope_in, const std::function<double(int)>& flux_of,
                     Vec2& avg_out, Mat2& slope_out, int drop = -1);

}  // namespace mhdfv

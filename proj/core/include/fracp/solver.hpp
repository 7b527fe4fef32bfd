// Constrained minimization J = inf{ a(u) : b(u) = 1 } by dilation-projected
// gradient descent with guarded symmetrization, and the scaled-minimizer
// construction u_bar = T_sigma_bar u.
#pragma once

#include <string>
#include <vector>

#include "fracp/angular_kernel.hpp"
#include "fracp/energy.hpp"
#include "fracp/nonlinearity.hpp"
#include "fracp/params.hpp"
#include "fracp/radial_profile.hpp"

namespace fracp {

struct SolveConfig {
  int max_iters = 800;
  double step0 = 0.2;
  double step_shrink = 0.5;
  double step_grow = 1.25;
  double grad_tol = 1e-6;       // projected-gradient L^2 norm
  double energy_tol = 1e-10;    // relative decrease over the last 20 iterations
  int symmetrize_every = 10;
  bool deterministic = true;    // no stochastic component exists; reserved flag

  void validate() const;
};

struct TracePoint {
  int iter;
  double a;      // energy of the feasible iterate (= current J estimate)
  double b_dev;  // |b - 1| after projection
  double step;   // accepted step size (0 for projection/symmetrization rows)
};

struct SolveReport {
  double J_est = 0;
  double sigma_bar = 0;
  double a_final = 0;   // a at the b = 1 minimizer
  double b_final = 0;   // re-evaluated b at the minimizer (within 1e-8 of 1)
  double pohozaev_residual = 0;  // P(u_bar) = (N - sp) a(u_bar) - N b(u_bar)
  double lagrange_mismatch = 0;  // at the minimizer, multiplier J (N-sp)/N
  double weak_residual = 0;      // <a'(u_bar), v> vs <b'(u_bar), v> over the bank
  double a_ubar = 0;
  double b_ubar = 0;
  double zeta = 0;        // resolved (g3) witness used by the initializer
  double R_init = 0;      // plateau radius picked from the search schedule
  int iterations = 0;
  std::string termination;
  std::vector<TracePoint> trace;
};

struct SolveResult {
  SolveReport report;
  RadialProfile minimizer;  // b = 1 iterate (physical grid)
  RadialProfile ubar;       // scaled minimizer
};

// dilate(u, b(u)^{-1/N}); the result satisfies b = 1 to quadrature accuracy.
// Throws ConstraintError carrying b(u) when b(u) <= 0.
RadialProfile project_constraint(const RadialProfile& u, const Nonlinearity& nl,
                                 const Params& params);

// Iterate bookkeeping: the physical iterate is dilate(v, sigma) with b = 1;
// v lives on the kernel grid so no kernel rebuild is ever needed.
struct SolverState {
  double sigma = 1.0;
  double step = 0.2;
};

struct StepResult {
  std::vector<double> values;  // new base-grid values (== input when rejected)
  bool accepted = false;
  double grad_norm = 0;  // projected-gradient norm at the input iterate
  double a_after = 0;    // feasible energy after the step
  double b_base = 0;     // raw b of the new base values
};

// One backtracking steepest-descent step in the volume-weighted nodal metric,
// b-gradient component removed, dilation re-projection folded in. Returns
// accepted = false at a discrete constrained critical point (projected
// gradient below grad_tol). Throws StepFailure after 30 backtracks.
StepResult descend_step(const RadialProfile& v, SolverState& state,
                        const Nonlinearity& nl, const Params& params,
                        const AngularKernel& kernel, const SolveConfig& cfg);

// Fixed bank of 12 test profiles on the given node set: Gaussians at three
// widths, tents at three radii, two sign-changing wavelets, four shifted bumps.
std::vector<RadialProfile> make_test_bank(const RadialProfile& grid_ref);

// max over the bank of |<a'(u), v> - J (N-sp)/N <b'(u), v>| / (1 + |<a'(u), v>|)
// where u = dilate(v_base, sigma) is the feasible iterate; sigma = 1 evaluates
// the spec form directly on the kernel grid.
double lagrange_check(const RadialProfile& v_base, double sigma, double J_est,
                      const Nonlinearity& nl, const Params& params,
                      const AngularKernel& kernel,
                      const std::vector<RadialProfile>& bank);

SolveResult solve(const Nonlinearity& nl, const Params& params,
                  const SolveConfig& cfg, const GridSpec& grid = {},
                  const KernelOptions& kopt = {},
                  const std::string& cache_dir = "");

}  // namespace fracp

#include "fracp/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracp/errors.hpp"
#include "fracp/symmetrization.hpp"

namespace fracp {

void SolveConfig::validate() const {
  if (max_iters < 1) throw DomainError("solve.max_iters must be >= 1");
  if (!(step0 > 0.0)) throw DomainError("solve.step0 must be positive");
  if (!(step_shrink > 0.0 && step_shrink < 1.0))
    throw DomainError("solve.step_shrink must lie in (0, 1)");
  if (!(step_grow >= 1.0)) throw DomainError("solve.step_grow must be >= 1");
  if (!(grad_tol > 0.0)) throw DomainError("solve.grad_tol must be positive");
  if (!(energy_tol > 0.0)) throw DomainError("solve.energy_tol must be positive");
  if (symmetrize_every < 1) throw DomainError("solve.symmetrize_every must be >= 1");
}

RadialProfile project_constraint(const RadialProfile& u, const Nonlinearity& nl,
                                 const Params& params) {
  const double b = potential_b(u, nl, params);
  if (!(b > 0.0))
    throw ConstraintError("project_constraint needs b(u) > 0, got b = " +
                              std::to_string(b),
                          b);
  const double sigma = std::pow(b, -1.0 / params.N);
  RadialProfile out = dilate(u, sigma);
  const double b_after = potential_b(out, nl, params);
  if (std::abs(b_after - 1.0) > 1e-8)
    throw Error("projection drift: |b - 1| = " + std::to_string(std::abs(b_after - 1.0)));
  return out;
}

namespace {

// feasible energy of base values with raw potential b: the dilation that
// enforces b = 1 rescales a by b^{-(N-sp)/N}
double feasible_energy(double a_base, double b_base, const Params& params) {
  return a_base * std::pow(b_base, -(params.N - params.sp()) / params.N);
}

}  // namespace

StepResult descend_step(const RadialProfile& v, SolverState& state,
                        const Nonlinearity& nl, const Params& params,
                        const AngularKernel& kernel, const SolveConfig& cfg) {
  kernel.require_match(v);
  const int N = params.N;
  const double sp = params.sp();
  const double sigma = state.sigma;

  const std::vector<double> mu = node_volumes(v, N);
  std::vector<double> ga = gagliardo_gradient(v, params, kernel);
  std::vector<double> gb = potential_gradient(v, nl, params);

  // Riesz representatives in the volume-weighted nodal metric at the physical
  // scale: values are shared between v and dilate(v, sigma), the scale enters
  // through the covariance exponents only.
  const double a_scale = std::pow(sigma, -sp);  // sigma^{N-sp} / sigma^N
  const std::size_t M = v.size();
  std::vector<double> Ga(M), Gb(M);
  for (std::size_t i = 0; i < M; ++i) {
    Ga[i] = a_scale * ga[i] / mu[i];
    Gb[i] = gb[i] / mu[i];
  }
  double ab = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    ab += mu[i] * Ga[i] * Gb[i];
    bb += mu[i] * Gb[i] * Gb[i];
  }
  const double coef = (bb > 0.0) ? ab / bb : 0.0;
  std::vector<double> d(M);
  double norm2 = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    d[i] = -(Ga[i] - coef * Gb[i]);
    norm2 += mu[i] * d[i] * d[i];
  }
  const double grad_norm = std::sqrt(ipow(sigma, N) * norm2);

  StepResult res;
  res.values = v.values();
  res.grad_norm = grad_norm;
  const double b_cur = potential_b(v, nl, params);
  const double a_cur = feasible_energy(gagliardo_energy(v, params, kernel), b_cur, params);
  res.a_after = a_cur;
  res.b_base = b_cur;
  if (grad_norm < cfg.grad_tol) return res;  // discrete critical point

  double t = state.step;
  for (int tries = 0; tries < 30; ++tries) {
    std::vector<double> cand(M);
    for (std::size_t i = 0; i < M; ++i) cand[i] = v.values()[i] + t * d[i];
    const RadialProfile vc = v.with_values(std::move(cand));
    const double b_c = potential_b(vc, nl, params);
    if (b_c > 0.0) {
      const double a_c = feasible_energy(gagliardo_energy(vc, params, kernel), b_c, params);
      if (a_c < a_cur) {
        res.values = vc.values();
        res.accepted = true;
        res.a_after = a_c;
        res.b_base = b_c;
        state.step = std::min(t * cfg.step_grow, cfg.step0 * 1e3);
        state.sigma = std::pow(b_c, -1.0 / N);
        return res;
      }
    }
    t *= cfg.step_shrink;
  }
  throw StepFailure("backtracking underflow (projected gradient norm " +
                        std::to_string(grad_norm) + ")",
                    grad_norm);
}

std::vector<RadialProfile> make_test_bank(const RadialProfile& grid_ref) {
  std::vector<RadialProfile> bank;
  auto add = [&](auto&& f) {
    bank.push_back(RadialProfile::from_function(grid_ref.nodes(), f));
  };
  for (double w : {0.5, 1.0, 2.0})
    add([w](double r) { return std::exp(-(r / w) * (r / w)); });
  for (double R : {1.0, 2.0, 4.0})
    add([R](double r) { return std::max(0.0, 1.0 - r / R); });
  for (double a : {1.0, 2.0})
    add([a](double r) {
      const double t = (r / a) * (r / a);
      return (1.0 - t) * std::exp(-t);
    });
  for (double c : {1.0, 2.0, 3.0, 4.0})
    add([c](double r) {
      const double t = (r - c) / 0.5;
      return std::exp(-t * t);
    });
  return bank;
}

double lagrange_check(const RadialProfile& v_base, double sigma, double J_est,
                      const Nonlinearity& nl, const Params& params,
                      const AngularKernel& kernel,
                      const std::vector<RadialProfile>& bank) {
  kernel.require_match(v_base);
  const double sp = params.sp();
  const double lam = J_est * (params.N - sp) / params.N;
  const double sa = std::pow(sigma, params.N - sp);
  const double sb = ipow(sigma, params.N);
  double worst = 0.0;
  for (const auto& w : bank) {
    const double A = sa * gagliardo_first_variation(v_base, w, params, kernel);
    const double B = sb * potential_first_variation(v_base, w, nl, params);
    worst = std::max(worst, std::abs(A - lam * B) / (1.0 + std::abs(A)));
  }
  return worst;
}

SolveResult solve(const Nonlinearity& nl, const Params& params,
                  const SolveConfig& cfg, const GridSpec& grid,
                  const KernelOptions& kopt, const std::string& cache_dir) {
  cfg.validate();
  if (params.N < 2)
    throw DomainError("solver entry points require N >= 2, got N = " +
                      std::to_string(params.N));
  const int N = params.N;
  const double sp = params.sp();

  // Initializer: double R until b(w_R) > 0.
  double R_used = 0.0;
  double b0 = 0.0;
  RadialProfile v = [&] {
    for (double R : {4.0, 8.0, 16.0, 32.0}) {
      RadialProfile w = initial_guess(nl, params, R, grid);
      const double b = potential_b(w, nl, params);
      if (b > 0.0) {
        R_used = R;
        b0 = b;
        return w;
      }
    }
    throw InfeasibleStart("b(w_R) <= 0 for all R in {4, 8, 16, 32}");
  }();

  const AngularKernel kernel = AngularKernel::load_or_build(params, v, cache_dir, kopt);

  SolverState state;
  state.sigma = std::pow(b0, -1.0 / N);
  state.step = cfg.step0;

  SolveReport rep;
  rep.zeta = nl.zeta();
  rep.R_init = R_used;

  double b_base = b0;
  double a_cur = feasible_energy(gagliardo_energy(v, params, kernel), b_base, params);
  rep.trace.push_back({0, a_cur, std::abs(ipow(state.sigma, N) * b_base - 1.0), 0.0});

  int iter = 0;
  std::string termination;
  for (iter = 1; iter <= cfg.max_iters; ++iter) {
    if (cfg.symmetrize_every > 0 && iter % cfg.symmetrize_every == 0) {
      RadialProfile vs = symmetrize_radial(v, N);
      const double bs = potential_b(vs, nl, params);
      if (bs > 0.0) {
        const double as = feasible_energy(gagliardo_energy(vs, params, kernel), bs, params);
        if (as <= a_cur) {  // guarded: keep only when a does not increase
          v = std::move(vs);
          b_base = bs;
          a_cur = as;
          state.sigma = std::pow(bs, -1.0 / N);
          rep.trace.push_back(
              {iter, a_cur, std::abs(ipow(state.sigma, N) * b_base - 1.0), 0.0});
        }
      }
    }

    StepResult step;
    try {
      step = descend_step(v, state, nl, params, kernel, cfg);
    } catch (const StepFailure& f) {
      const std::size_t n = rep.trace.size();
      const double ref = (n > 20) ? rep.trace[n - 21].a : rep.trace.front().a;
      if (ref - a_cur <= cfg.energy_tol * (1.0 + std::abs(a_cur))) {
        termination = "stagnated";
        break;
      }
      throw SolverDiverged("line search underflow while still descending (" +
                           std::string(f.what()) + ")");
    }
    if (!step.accepted) {
      termination = "stationary";
      break;
    }
    v = v.with_values(std::move(step.values));
    b_base = step.b_base;
    a_cur = step.a_after;
    rep.trace.push_back({iter, a_cur,
                         std::abs(ipow(state.sigma, N) * b_base - 1.0), state.step});

    const std::size_t n = rep.trace.size();
    if (n > 20) {
      const double ref = rep.trace[n - 21].a;
      if (ref - a_cur <= cfg.energy_tol * (1.0 + std::abs(a_cur))) {
        termination = "stagnated";
        break;
      }
    }
  }
  if (termination.empty()) {
    const std::size_t n = rep.trace.size();
    const double ref = (n > 20) ? rep.trace[n - 21].a : rep.trace.front().a;
    if (ref - a_cur > cfg.energy_tol * (1.0 + std::abs(a_cur)))
      throw SolverDiverged("max_iters reached with relative energy decrease " +
                           std::to_string(ref - a_cur) + " over the last 20 iterations");
    termination = "max_iters";
  }
  rep.iterations = std::min(iter, cfg.max_iters);
  rep.termination = termination;

  rep.J_est = a_cur;
  const double rate = (N - sp) * rep.J_est / N;
  if (!(rate > 0.0))
    throw SolverDiverged("(N - sp) J / N = " + std::to_string(rate) +
                         " is not positive; sigma_bar undefined");
  rep.sigma_bar = std::pow(rate, 1.0 / sp);
  rep.a_final = rep.J_est;

  RadialProfile minimizer = dilate(v, state.sigma);
  rep.b_final = potential_b(minimizer, nl, params);

  const std::vector<RadialProfile> bank = make_test_bank(v);
  rep.lagrange_mismatch =
      lagrange_check(v, state.sigma, rep.J_est, nl, params, kernel, bank);

  // Honest re-evaluation at the scaled minimizer on its own grid and kernel.
  RadialProfile ubar = dilate(minimizer, rep.sigma_bar);
  const AngularKernel kernel2 =
      AngularKernel::load_or_build(params, ubar, cache_dir, kopt);
  rep.a_ubar = gagliardo_energy(ubar, params, kernel2);
  rep.b_ubar = potential_b(ubar, nl, params);
  rep.pohozaev_residual = (N - sp) * rep.a_ubar - N * rep.b_ubar;
  const std::vector<RadialProfile> bank2 = make_test_bank(ubar);
  double worst = 0.0;
  for (const auto& w : bank2) {
    const double A = gagliardo_first_variation(ubar, w, params, kernel2);
    const double B = potential_first_variation(ubar, w, nl, params);
    worst = std::max(worst, std::abs(A - B) / (1.0 + std::abs(A)));
  }
  rep.weak_residual = worst;

  return SolveResult{std::move(rep), std::move(minimizer), std::move(ubar)};
}

}  // namespace fracp

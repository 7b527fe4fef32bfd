#include "fracp/identities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fracp/errors.hpp"
#include "fracp/numerics.hpp"
#include "fracp/symmetrization.hpp"

namespace fracp {

double cutoff_psi(double t) {
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double x = t - 1.0;
  return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

double cutoff_psi_prime(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double x = t - 1.0;
  return -30.0 * x * x * (1.0 - x) * (1.0 - x);
}

double VectorFieldSpec::eta(double r) const {
  return kind == Kind::pure_identity ? 1.0 : cutoff_psi(lambda * r);
}

double VectorFieldSpec::eta_prime(double r) const {
  return kind == Kind::pure_identity ? 0.0 : lambda * cutoff_psi_prime(lambda * r);
}

double VectorFieldSpec::divergence(int N, double r) const {
  return N * eta(r) + r * eta_prime(r);
}

double VectorFieldSpec::support_radius() const {
  return kind == Kind::pure_identity ? std::numeric_limits<double>::infinity()
                                     : 2.0 / lambda;
}

VectorFieldSpec make_identity_cutoff(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("identity_cutoff lambda must be positive");
  VectorFieldSpec X;
  X.kind = VectorFieldSpec::Kind::identity_cutoff;
  X.lambda = lambda;
  double lip = 0.0;
  for (int i = 0; i <= 2048; ++i) {
    const double t = 2.0 * i / 2048.0;
    lip = std::max(lip, cutoff_psi(t) + t * std::abs(cutoff_psi_prime(t)));
  }
  X.lipschitz_estimate = lip;
  return X;
}

VectorFieldSpec make_pure_identity() {
  VectorFieldSpec X;
  X.kind = VectorFieldSpec::Kind::pure_identity;
  X.lambda = 0.0;
  X.lipschitz_estimate = 1.0;
  return X;
}

double divergence_bracket_radial(const VectorFieldSpec& X, double r, double rho,
                                 double c, const Params& params) {
  const double eta_r = X.eta(r);
  const double eta_rho = X.eta(rho);
  const double cross = r * rho * c;
  const double dot = eta_r * (r * r) + eta_rho * (rho * rho) - (eta_r + eta_rho) * cross;
  const double d2 = r * r + rho * rho - 2.0 * cross;
  if (d2 == 0.0) throw DomainError("divergence_bracket needs x != y");
  const double divx = X.divergence(params.N, r);
  const double divy = X.divergence(params.N, rho);
  return divx + divy - (params.N + params.sp()) * (dot / d2);
}

double divergence_bracket(const VectorFieldSpec& X, std::span<const double> x,
                          std::span<const double> y, const Params& params) {
  if (x.size() != static_cast<std::size_t>(params.N) || x.size() != y.size())
    throw DomainError("divergence_bracket: point dimension must equal N");
  double rx2 = 0.0, ry2 = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    rx2 += x[i] * x[i];
    ry2 += y[i] * y[i];
    cross += x[i] * y[i];
  }
  const double r = std::sqrt(rx2), rho = std::sqrt(ry2);
  const double eta_r = X.eta(r);
  const double eta_rho = X.eta(rho);
  const double dot = eta_r * rx2 + eta_rho * ry2 - (eta_r + eta_rho) * cross;
  const double d2 = rx2 + ry2 - 2.0 * cross;
  if (d2 == 0.0) throw DomainError("divergence_bracket needs x != y");
  return X.divergence(params.N, r) + X.divergence(params.N, rho) -
         (params.N + params.sp()) * (dot / d2);
}

namespace {

struct BracketStats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  void see(double v) {
    min = std::min(min, v);
    max = std::max(max, v);
  }
};

// int_rmax^inf rho^{N-1} [angular bracket-weighted kernel] d rho for the
// zero-extension pairs; the bracket stays bounded so the integral converges
// like the plain kernel tail.
double bracket_tail(const VectorFieldSpec& X, const Params& params, double r,
                    double rmax, int panels, BracketStats* stats) {
  const double sp = params.sp();
  const GaussRule& gl = gauss_legendre(4);
  double acc = 0.0;
  double lo = rmax;
  for (int k = 0; k < panels; ++k) {
    const double hi = 2.0 * lo;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double rho = mid + half * gl.x[i];
      acc += gl.w[i] * half * ipow(rho, params.N - 1) *
             angular_kernel_weighted(params.N, sp, r, rho, [&](double c) {
               const double b = divergence_bracket_radial(X, r, rho, c, params);
               if (stats) stats->see(b);
               return b;
             });
    }
    lo = hi;
  }
  // Beyond the last panel X(y) = 0 and div X(y) = 0 (or eta = 1 for the pure
  // identity); the remaining contribution is the asymptotic kernel tail times
  // the limiting bracket div X(x) (plus N - sp for the pure identity field).
  const double limit_bracket = X.kind == VectorFieldSpec::Kind::pure_identity
                                   ? (params.N - sp)
                                   : X.divergence(params.N, r);
  acc += limit_bracket * unit_sphere_area(params.N - 1) * std::pow(lo, -sp) / sp;
  return acc;
}

// lhs double integral (without the C/2 prefactor or the sign/p of the study
// variant): sum over pair quadrature of |u(r)-u(rho)|^p * bracket-weighted
// kernel, zero-extension tail included.
double bracket_lhs_sum(const RadialProfile& u, const VectorFieldSpec& X,
                       const Params& params, const IbpOptions& opt,
                       BracketStats* stats) {
  const double sp = params.sp();
  const double p = params.p;
  const detail::PairRule rule = detail::build_pair_rule(u, opt.pair);
  const auto& uv = u.values();
  std::vector<double> parts(rule.outer.size());
  for (std::size_t oi = 0; oi < rule.outer.size(); ++oi) {
    const auto& o = rule.outer[oi];
    const double Uo = RadialProfile::apply_stencil(o.st, uv);
    double acc = 0.0;
    for (std::uint32_t qi = o.begin; qi < o.end; ++qi) {
      const auto& in = rule.inner[qi];
      const double Uq = RadialProfile::apply_stencil(in.st, uv);
      const double d = Uo - Uq;
      const double dp = (p == 2.0) ? d * d : std::pow(std::abs(d), p);
      if (dp == 0.0) continue;
      const double kw =
          angular_kernel_weighted(params.N, sp, o.r, in.rho, [&](double c) {
            const double b = divergence_bracket_radial(X, o.r, in.rho, c, params);
            if (stats) stats->see(b);
            return b;
          });
      acc += in.gw * ipow(in.rho, params.N - 1) * kw * dp;
    }
    const double up = (p == 2.0) ? Uo * Uo : std::pow(std::abs(Uo), p);
    if (up != 0.0)
      acc += 2.0 * up *
             bracket_tail(X, params, o.r, u.rmax(), opt.tail_panels, stats);
    parts[oi] = o.gw * ipow(o.r, params.N - 1) * acc;
  }
  return pairwise_sum(parts);
}

}  // namespace

IdentityReport ibp_check(const RadialProfile& u, const VectorFieldSpec& X,
                         const Params& params, const QuadSpec& quad,
                         const IbpOptions& opt) {
  if (!params.pointwise_ok)
    throw PointwiseUnsupported(
        "ibp_check needs the pointwise representation (p >= 2 or s < 2(p-1)/p)");
  BracketStats stats;
  const double C = normalization_constant(params);
  const double omega = unit_sphere_area(params.N - 1);
  const double lhs =
      0.5 * C * omega * bracket_lhs_sum(u, X, params, opt, &stats);

  // rhs = -p int X . grad u (-Delta)^s_p u dx over panels of grouped cells.
  const auto& r = u.nodes();
  const GaussRule& gl = gauss_legendre(2);
  const double skip_below = 1e-14 * (u.max_abs_value() + 1e-300);
  std::vector<double> parts;
  const double xsup = X.support_radius();
  for (std::size_t c = 0; c + 1 < r.size(); c += opt.rhs_cell_group) {
    const std::size_t hi_idx = std::min(c + opt.rhs_cell_group, r.size() - 1);
    const double a = r[c], b = r[hi_idx];
    if (a >= xsup) break;
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double rg = mid + half * gl.x[i];
      const double xdu = X.eta(rg) * rg * u.derivative(rg);
      if (std::abs(xdu) < skip_below * rg) continue;
      const double flp = flp_apply(u, rg, params, quad).value;
      acc += gl.w[i] * half * xdu * flp * ipow(rg, params.N - 1);
    }
    parts.push_back(acc);
  }
  const double rhs = -params.p * omega * pairwise_sum(parts);

  IdentityReport rep;
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.rel_residual =
      std::abs(lhs - rhs) / (1.0 + std::max(std::abs(lhs), std::abs(rhs)));
  rep.bracket_min = stats.min;
  rep.bracket_max = stats.max;
  return rep;
}

double pohozaev_residual(const RadialProfile& u, const Nonlinearity& nl,
                         const Params& params, const AngularKernel& kernel) {
  const double a = gagliardo_energy(u, params, kernel);
  const double b = potential_b(u, nl, params);
  return (params.N - params.sp()) * a - params.N * b;
}

std::vector<LimitStudyRow> cutoff_limit_study(const RadialProfile& u,
                                              const Nonlinearity& nl,
                                              const Params& params,
                                              std::span<const double> lambdas,
                                              const IbpOptions& opt) {
  if (!params.pointwise_ok)
    throw PointwiseUnsupported(
        "cutoff_limit_study needs the pointwise representation");
  for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
    if (!(lambdas[i] > lambdas[i + 1]))
      throw DomainError("lambdas must be positive decreasing");
  if (!lambdas.empty() && !(lambdas.back() > 0.0))
    throw DomainError("lambdas must be positive");

  const double C = normalization_constant(params);
  const double omega = unit_sphere_area(params.N - 1);
  const std::vector<double> mu = node_volumes(u, params.N);

  std::vector<LimitStudyRow> rows;
  rows.reserve(lambdas.size());
  for (double lam : lambdas) {
    const VectorFieldSpec X = make_identity_cutoff(lam);
    LimitStudyRow row;
    row.lambda = lam;
    row.lhs = -0.5 * C / params.p * omega *
              bracket_lhs_sum(u, X, params, opt, nullptr);
    double gterm = 0.0, lterm = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double r = u.nodes()[i];
      const double G = nl.G(u.values()[i]);
      gterm += mu[i] * cutoff_psi(lam * r) * G;
      lterm += mu[i] * G * lam * r * cutoff_psi_prime(lam * r);
    }
    row.g_term = params.N * gterm;
    row.lambda_term = lam * lterm;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fracp

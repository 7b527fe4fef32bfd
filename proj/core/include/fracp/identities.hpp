// Numerical verification of the Pohozaev identity and the nonlocal
// integration-by-parts formula for vector fields X(x) = eta(|x|) x.
#pragma once

#include <span>
#include <vector>

#include "fracp/angular_kernel.hpp"
#include "fracp/energy.hpp"
#include "fracp/flp_operator.hpp"
#include "fracp/nonlinearity.hpp"
#include "fracp/params.hpp"
#include "fracp/radial_profile.hpp"

namespace fracp {

// Radial vector fields X(x) = eta(|x|) x. identity_cutoff uses
// eta(r) = psi(lambda r) with psi the C^2 quintic smoothstep plateau
// (1 below 1, 0 above 2); pure_identity is X(x) = x.
struct VectorFieldSpec {
  enum class Kind { identity_cutoff, pure_identity };
  Kind kind = Kind::pure_identity;
  double lambda = 0.0;
  double lipschitz_estimate = 1.0;

  double eta(double r) const;
  double eta_prime(double r) const;          // d/dr eta(r)
  double divergence(int N, double r) const;  // N eta + r eta'
  double support_radius() const;             // 2/lambda, +inf for pure identity
};

VectorFieldSpec make_identity_cutoff(double lambda);
VectorFieldSpec make_pure_identity();

// The smoothstep plateau and its derivative (shared with tests).
double cutoff_psi(double t);
double cutoff_psi_prime(double t);

// div X(x) + div X(y) - (N + sp) (X(x) - X(y)) . (x - y) / |x - y|^2
// for points x != y in R^N. For the pure identity field this evaluates to
// N - sp exactly (the quotient is computed as a bitwise ratio of identical
// expressions).
double divergence_bracket(const VectorFieldSpec& X, std::span<const double> x,
                          std::span<const double> y, const Params& params);

// Radial-pair form of the bracket at |x| = r, |y| = rho, cos angle c.
double divergence_bracket_radial(const VectorFieldSpec& X, double r, double rho,
                                 double c, const Params& params);

struct IdentityReport {
  double lhs = 0;           // (C/2) double integral with the divergence bracket
  double rhs = 0;           // -p int X . grad u (-Delta)^s_p u
  double rel_residual = 0;  // |lhs - rhs| / (1 + max(|lhs|, |rhs|))
  double bracket_min = 0;
  double bracket_max = 0;
};

struct IbpOptions {
  detail::PairRuleOptions pair{2, 2, 40, 4};
  int tail_panels = 40;
  int rhs_cell_group = 2;  // grid cells merged per rhs Gauss panel
};

// Both sides of the integration-by-parts formula; lhs via the radial-pair
// reduction with the bracket sampled at angular nodes, rhs via pointwise
// operator quadrature (disjoint code paths).
IdentityReport ibp_check(const RadialProfile& u, const VectorFieldSpec& X,
                         const Params& params, const QuadSpec& quad,
                         const IbpOptions& opt = {});

// P(u) = (N - sp) a(u) - N b(u).
double pohozaev_residual(const RadialProfile& u, const Nonlinearity& nl,
                         const Params& params, const AngularKernel& kernel);

struct LimitStudyRow {
  double lambda;
  double lhs;          // -(C/2p) double integral with the X_lambda bracket
  double g_term;       // N int phi_lambda G(u)
  double lambda_term;  // lambda int G(u) x . grad phi_lambda (must vanish)
};

// Evaluates the cutoff identity at each lambda (positive, decreasing); the
// lhs tends to -(N - sp) a(u) and the volume terms to N b(u) as lambda -> 0.
std::vector<LimitStudyRow> cutoff_limit_study(const RadialProfile& u,
                                              const Nonlinearity& nl,
                                              const Params& params,
                                              std::span<const double> lambdas,
                                              const IbpOptions& opt = {});

}  // namespace fracp

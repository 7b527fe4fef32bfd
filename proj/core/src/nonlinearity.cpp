#include "fracp/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracp/errors.hpp"

namespace fracp {

namespace {

double scan_witness(const Nonlinearity& nl) {
  // Smallest scan value with G >= 0.1 * max G on [0, 2 zeta*].
  const int n = 4096;
  const double hi = 2.0 * nl.zeta_star();
  double gmax = 0.0;
  for (int i = 0; i <= n; ++i) gmax = std::max(gmax, nl.G(hi * i / n));
  const double target = 0.1 * gmax;
  for (int i = 1; i <= n; ++i) {
    const double t = hi * i / n;
    if (nl.G(t) >= target) return t;
  }
  return hi;
}

}  // namespace

NonlinearityEval Nonlinearity::eval_all(double t) const {
  NonlinearityEval e{};
  const double a = std::abs(t);
  const double sgn = (t > 0.0) - (t < 0.0);
  if (a == 0.0) return e;

  if (family_ == NonlinearityFamily::two_power || a <= splice_T_) {
    const double ap1 = std::pow(a, p_ - 1.0);
    const double aq1 = std::pow(a, q_ - 1.0);
    e.g1 = sgn * aq1;
    e.g2 = sgn * m_ * ap1;
    e.G1 = std::pow(a, q_) / q_;
    e.G2 = m_ / p_ * std::pow(a, p_);
  } else {
    // frozen tail: g constant beyond the splice, primitives continue linearly
    const double Tp1 = std::pow(splice_T_, p_ - 1.0);
    const double Tq1 = std::pow(splice_T_, q_ - 1.0);
    const double gT = -m_ * Tp1 + Tq1;
    const double ap1 = std::pow(a, p_ - 1.0);
    e.g1 = sgn * (gT + m_ * ap1);
    e.g2 = sgn * m_ * ap1;
    e.G1 = std::pow(splice_T_, q_) / q_ + gT * (a - splice_T_) +
           m_ / p_ * (std::pow(a, p_) - std::pow(splice_T_, p_));
    e.G2 = m_ / p_ * std::pow(a, p_);
  }
  e.g = e.g1 - e.g2;
  e.G = e.G1 - e.G2;
  return e;
}

static void check_exponents(double m, double q, const Params& params) {
  if (!(m > 0.0)) throw DomainError("nonlinearity m = " + std::to_string(m) +
                                    " violates m > 0");
  if (!(q > params.p))
    throw DomainError("nonlinearity q = " + std::to_string(q) +
                      " violates q > p = " + std::to_string(params.p));
  if (!(q < params.pstar))
    throw DomainError("nonlinearity q = " + std::to_string(q) +
                      " violates q < p*_s = " + std::to_string(params.pstar));
}

Nonlinearity make_model(double m, double q, const Params& params) {
  check_exponents(m, q, params);
  Nonlinearity nl;
  nl.family_ = NonlinearityFamily::two_power;
  nl.m_ = m;
  nl.q_ = q;
  nl.p_ = params.p;
  nl.zeta_star_ = std::pow(q * m / params.p, 1.0 / (q - params.p));
  nl.zeta_ = scan_witness(nl);
  return nl;
}

Nonlinearity make_bounded_tail(double m, double q, const Params& params,
                               double splice_T) {
  check_exponents(m, q, params);
  Nonlinearity nl;
  nl.family_ = NonlinearityFamily::bounded_tail;
  nl.m_ = m;
  nl.q_ = q;
  nl.p_ = params.p;
  nl.zeta_star_ = std::pow(q * m / params.p, 1.0 / (q - params.p));
  const double t_sign_change = std::pow(m, 1.0 / (q - params.p));  // g(t)=0
  if (splice_T <= 0.0)
    splice_T = std::max(2.0 * nl.zeta_star_, 1.5 * t_sign_change);
  if (splice_T < t_sign_change)
    throw DomainError("bounded_tail splice_T = " + std::to_string(splice_T) +
                      " must not precede the sign change of g at " +
                      std::to_string(t_sign_change));
  nl.splice_T_ = splice_T;
  nl.zeta_ = scan_witness(nl);
  return nl;
}

RadialProfile initial_guess(const Nonlinearity& nl, const Params& params, double R,
                            const GridSpec& spec) {
  (void)params;
  if (!(R > 0.0)) throw DomainError("initializer radius R must be positive");
  GridSpec gs = spec;
  gs.rmax = std::max(spec.rmax, R + 3.0);
  std::vector<double> nodes = make_graded_nodes(gs);
  for (double extra : {R, R + 0.5, R + 1.0}) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), extra);
    const double near = (it != nodes.end()) ? *it : nodes.back();
    const double prev = (it != nodes.begin()) ? *(it - 1) : nodes.front();
    if (std::min(std::abs(near - extra), std::abs(extra - prev)) > 1e-9 * extra)
      nodes.insert(it, extra);
  }
  const double zeta = nl.zeta();
  return RadialProfile::from_function(std::move(nodes), [&](double r) {
    if (r <= R) return zeta;
    if (r >= R + 1.0) return 0.0;
    return zeta * (R + 1.0 - r);
  });
}

}  // namespace fracp

// Berestycki-Lions model nonlinearities with the g = g1 - g2 splitting.
#pragma once

#include <string>

#include "fracp/params.hpp"
#include "fracp/radial_profile.hpp"

namespace fracp {

enum class NonlinearityFamily { two_power, bounded_tail };

struct NonlinearityEval {
  double g, G, g1, g2, G1, G2;
};

// g(t) = -m|t|^{p-2}t + |t|^{q-2}t with p < q < p*_s, split as
// g1(t) = (g(t) + m t^{p-1})^+ (odd extension) and g2 = g1 - g.
// The bounded_tail family freezes g at |t| = splice_T (g constant beyond),
// which strengthens the supercritical decay hypothesis while leaving the
// small-t behaviour untouched.
class Nonlinearity {
public:
  NonlinearityFamily family() const { return family_; }
  double m() const { return m_; }
  double q() const { return q_; }
  double p() const { return p_; }
  double splice_T() const { return splice_T_; }

  // Threshold (qm/p)^{1/(q-p)} where the primitive G first turns positive.
  double zeta_star() const { return zeta_star_; }
  // Stored (g3) witness: smallest scan value with G >= 0.1 max G on [0, 2 zeta*].
  double zeta() const { return zeta_; }

  NonlinearityEval eval_all(double t) const;
  double g(double t) const { return eval_all(t).g; }
  double G(double t) const { return eval_all(t).G; }

  std::string family_name() const {
    return family_ == NonlinearityFamily::two_power ? "two_power" : "bounded_tail";
  }

private:
  friend Nonlinearity make_model(double, double, const Params&);
  friend Nonlinearity make_bounded_tail(double, double, const Params&, double);
  Nonlinearity() = default;

  NonlinearityFamily family_ = NonlinearityFamily::two_power;
  double m_ = 1.0;
  double q_ = 3.0;
  double p_ = 2.0;
  double splice_T_ = 0.0;  // bounded_tail only
  double zeta_star_ = 0.0;
  double zeta_ = 0.0;
};

// Validates m > 0 and p < q < p*_s (DomainError names the violated side).
Nonlinearity make_model(double m, double q, const Params& params);

// Same small-t model, constant beyond splice_T (splice_T <= 0 picks a default
// beyond the sign change of g).
Nonlinearity make_bounded_tail(double m, double q, const Params& params,
                               double splice_T = 0.0);

// The plateau initializer w_R: zeta for r <= R, linear down to 0 on
// [R, R+1], 0 beyond. Built on a graded grid augmented with the kink nodes
// {R, R+1/2, R+1}; the grid's rmax is max(spec.rmax, R+3).
RadialProfile initial_guess(const Nonlinearity& nl, const Params& params, double R,
                            const GridSpec& spec = {});

}  // namespace fracp

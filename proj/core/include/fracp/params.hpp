// Validated problem parameters (N, s, p) and derived quantities.
#pragma once

namespace fracp {

struct Params {
  int N;             // spatial dimension, N >= 1 (solver entry points need N >= 2)
  double s;          // fractional order, 0 < s < 1
  double p;          // integrability exponent, 1 < p < N/s
  double pstar;      // critical exponent Np/(N - sp)
  bool pointwise_ok; // pointwise operator evaluation valid: p >= 2 or s < 2(p-1)/p

  double sp() const { return s * p; }
};

// Checks 0 < s < 1, 1 < p < N/s, N >= 1 and fills the derived fields.
// Throws DomainError naming the violated bound.
Params validate(int N, double s, double p);

}  // namespace fracp

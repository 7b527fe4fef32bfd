#include "fracp/params.hpp"

#include <cmath>
#include <string>

#include "fracp/errors.hpp"

namespace fracp {

Params validate(int N, double s, double p) {
  if (N < 1)
    throw DomainError("N = " + std::to_string(N) + " violates N >= 1");
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("s = " + std::to_string(s) + " violates 0 < s < 1");
  if (!(p > 1.0))
    throw DomainError("p = " + std::to_string(p) + " violates p > 1");
  const double upper = static_cast<double>(N) / s;
  if (!(p < upper))
    throw DomainError("p = " + std::to_string(p) + " violates p < N/s = " +
                      std::to_string(upper));
  Params out;
  out.N = N;
  out.s = s;
  out.p = p;
  out.pstar = static_cast<double>(N) * p / (static_cast<double>(N) - s * p);
  out.pointwise_ok = (p >= 2.0) || (s < 2.0 * (p - 1.0) / p);
  return out;
}

}  // namespace fracp

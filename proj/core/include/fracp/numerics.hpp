// Small numeric utilities: Gauss-Legendre rules, deterministic reductions,
// integer powers, content hashing.
#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <vector>

namespace fracp {

struct GaussRule {
  std::vector<double> x;  // nodes in (-1, 1)
  std::vector<double> w;  // weights, sum = 2
};

// Cached Gauss-Legendre rule with n nodes (n >= 1).
const GaussRule& gauss_legendre(int n);

// Pairwise (cascade) summation in index order; deterministic and more accurate
// than sequential accumulation for long sums.
double pairwise_sum(std::span<const double> v);

// x^n for small integer n >= 0 by repeated multiplication (keeps integer-power
// scalings exactly covariant under dilation up to one rounding per factor).
inline double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

// sign(t) * |t|^(p-1), the p-Laplacian nonlinearity of the difference quotient.
// Safe at t = 0 for every p > 1.
double phi_p(double t, double p);

// |S^{k}|, the surface area of the unit k-sphere in R^{k+1}; |S^0| = 2.
double unit_sphere_area(int k);

// FNV-1a 64-bit over raw bytes.
inline std::uint64_t fnv1a64(const void* data, std::size_t n,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::span<const double> v,
                             std::uint64_t h = 0xcbf29ce484222325ull) {
  return fnv1a64(v.data(), v.size() * sizeof(double), h);
}

}  // namespace fracp

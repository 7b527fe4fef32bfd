// Radial reduction of the 2N-fold Gagliardo double integral: precomputed
// angular kernel data on a pair quadrature adapted to the diagonal
// singularity, cacheable to a binary sidecar keyed by a content hash.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "fracp/numerics.hpp"
#include "fracp/params.hpp"
#include "fracp/radial_profile.hpp"

namespace fracp {

// Angular integral over S^{N-1} of |r e1 - rho w|^{-(N+sp)} * extra(<e1, w>),
// by graded half-angle panels concentrating where |r e1 - rho w| is smallest.
// Returns +inf for r == rho (the on-diagonal kernel is not finite).
template <class F>
double angular_kernel_weighted(int N, double sp, double r, double rho, F&& extra) {
  const double q = 0.5 * (N + sp);
  if (N == 1) {
    const double d = std::abs(r - rho);
    if (d == 0.0) return std::numeric_limits<double>::infinity();
    return std::pow(d, -2.0 * q) * extra(1.0) +
           std::pow(r + rho, -2.0 * q) * extra(-1.0);
  }
  const double d2 = (r - rho) * (r - rho);
  const double B = 2.0 * r * rho;
  if (d2 == 0.0) return std::numeric_limits<double>::infinity();

  const GaussRule& gl = gauss_legendre(8);
  const double half_pi = std::numbers::pi / 2.0;
  const double front = 2.0 * unit_sphere_area(N - 2);
  auto panel = [&](double a, double b) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double ph = mid + half * gl.x[i];
      const double s2 = std::sin(ph) * std::sin(ph);
      const double c = 1.0 - 2.0 * s2;  // cos(2*phi), stable near phi = 0
      double w = gl.w[i] * half;
      if (N == 3) w *= 2.0 * std::sin(ph) * std::cos(ph);
      else if (N > 3) w *= std::pow(std::abs(2.0 * std::sin(ph) * std::cos(ph)),
                                    N - 2);
      acc += w * std::pow(d2 + 2.0 * B * s2, -q) * extra(c);
    }
    return acc;
  };

  double phi_c =
      (B > 0.0) ? std::min(half_pi / 4.0, std::sqrt(d2 / (2.0 * B))) : half_pi;
  phi_c = std::max(phi_c, 1e-18);
  double acc = panel(0.0, 0.5 * phi_c) + panel(0.5 * phi_c, phi_c);
  double lo = phi_c;
  while (lo < half_pi) {
    const double hi = std::min(2.0 * lo, half_pi);
    acc += panel(lo, hi);
    lo = hi;
  }
  return front * acc;
}

inline double angular_kernel_integral(int N, double sp, double r, double rho) {
  return angular_kernel_weighted(N, sp, r, rho, [](double) { return 1.0; });
}

namespace detail {

// Geometry of the (r, rho) pair quadrature: per-cell Gauss points in the
// outer variable; per-cell Gauss points plus geometrically graded panels
// around the outer radius in the inner variable. Weights are plain
// length-measure Gauss weights; kernel and volume factors are baked later.
struct PairRule {
  struct Inner {
    double rho;
    double gw;  // d rho Gauss weight
    RadialProfile::Stencil st;
  };
  struct Outer {
    double r;
    double gw;  // d r Gauss weight
    RadialProfile::Stencil st;
    std::uint32_t begin = 0, end = 0;
  };
  std::vector<Outer> outer;
  std::vector<Inner> inner;
};

struct PairRuleOptions {
  int outer_gl = 2;    // Gauss points per cell, outer variable
  int cell_gl = 2;     // Gauss points per off-diagonal cell, inner variable
  int diag_depth = 40; // geometric halvings toward the diagonal per side
  int diag_gl = 4;     // Gauss points per diagonal panel
};

PairRule build_pair_rule(const RadialProfile& grid, const PairRuleOptions& opt);

}  // namespace detail

struct KernelOptions {
  detail::PairRuleOptions fine{2, 2, 40, 4};
  detail::PairRuleOptions coarse{1, 1, 20, 2};
  int tail_panels = 40;
  int threads = 0;  // 0: hardware count capped by FRACP_THREADS
};

// The kernel-baked pair quadrature for one (params, node set): inner weights
// carry gw * rho^{N-1} * K(r, rho); outer weights carry gw * r^{N-1}; per
// outer point the analytic zero-extension tail integral of the kernel
// beyond rmax is stored separately.
class AngularKernel {
public:
  struct BakedInner {
    double rho;
    double w;  // gw * rho^{N-1} * K(r_outer, rho)
    RadialProfile::Stencil st;
  };
  struct BakedOuter {
    double r;
    double w;     // gw * r^{N-1}
    double tail;  // int_rmax^inf rho^{N-1} K(r, rho) d rho
    RadialProfile::Stencil st;
    std::uint32_t begin = 0, end = 0;
  };
  struct Rule {
    std::vector<BakedOuter> outer;
    std::vector<BakedInner> inner;
  };

  static AngularKernel build(const Params& params, const RadialProfile& grid,
                             const KernelOptions& opt = {});

  // Sidecar cache: load_or_build reuses path when the content hash matches.
  static AngularKernel load(const std::string& path);
  void save(const std::string& path) const;
  static AngularKernel load_or_build(const Params& params, const RadialProfile& grid,
                                     const std::string& cache_dir,
                                     const KernelOptions& opt = {});

  bool matches(const RadialProfile& u) const { return u.grid_hash() == grid_hash_; }
  void require_match(const RadialProfile& u) const;

  const Rule& fine() const { return fine_; }
  const Rule& coarse() const { return coarse_; }
  int N() const { return N_; }
  double s() const { return s_; }
  double p() const { return p_; }
  std::uint64_t grid_hash() const { return grid_hash_; }
  std::uint64_t content_hash() const { return content_hash_; }
  const std::vector<double>& grid_nodes() const { return grid_nodes_; }

private:
  int N_ = 0;
  double s_ = 0, p_ = 0;
  std::uint64_t grid_hash_ = 0;
  std::uint64_t content_hash_ = 0;
  std::vector<double> grid_nodes_;
  Rule fine_, coarse_;
};

int resolve_thread_count(int requested);

}  // namespace fracp

#include "fracp/symmetrization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fracp/errors.hpp"
#include "fracp/numerics.hpp"

namespace fracp {

std::vector<double> node_volumes(const RadialProfile& u, int N) {
  const auto& r = u.nodes();
  const std::size_t M = r.size();
  const double omega = unit_sphere_area(N - 1);
  std::vector<double> V(M);
  double lo = 0.0;
  for (std::size_t i = 0; i < M; ++i) {
    const double hi = (i + 1 < M) ? 0.5 * (r[i] + r[i + 1]) : r.back();
    V[i] = omega / N * (ipow(hi, N) - ipow(lo, N));
    lo = hi;
  }
  return V;
}

RadialProfile schwarz_symmetrize(const PlanarGrid& f) {
  const double A = f.cell_area();
  std::vector<double> vals(f.values());
  for (double& v : vals) v = std::abs(v);
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  const std::size_t K =
      static_cast<std::size_t>(std::count_if(vals.begin(), vals.end(),
                                             [](double v) { return v > 0.0; }));
  if (K == 0) {
    const double L = f.L();
    return RadialProfile({0.0, L / 3, 2 * L / 3, L}, {0.0, 0.0, 0.0, 0.0});
  }
  // Equal-area cells map onto equal-area annuli; the k-th largest value
  // occupies [R_{k-1}, R_k) with pi R_k^2 = (k+1) A.
  const double pi = 3.14159265358979323846;
  std::vector<double> nodes, out;
  nodes.push_back(0.0);
  out.push_back(vals[0]);
  double R_prev = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double R_k = std::sqrt(A * (k + 1) / pi);
    nodes.push_back(0.5 * (R_prev + R_k));
    out.push_back(vals[k]);
    R_prev = R_k;
  }
  // One zero annulus pins the support boundary.
  nodes.push_back(std::sqrt(A * (K + 1) / pi));
  out.push_back(0.0);
  while (nodes.size() < 4) {
    nodes.push_back(nodes.back() * 1.5);
    out.push_back(0.0);
  }
  return RadialProfile(std::move(nodes), std::move(out));
}

RadialProfile symmetrize_radial(const RadialProfile& u, int N, double p_preserve) {
  if (!(p_preserve >= 1.0))
    throw DomainError("symmetrize_radial exponent must be >= 1");
  const std::size_t M = u.size();
  const std::vector<double> V = node_volumes(u, N);
  std::vector<double> av(M);
  for (std::size_t i = 0; i < M; ++i) av[i] = std::abs(u.values()[i]);

  // Layers sorted by value descending; equal values keep node order.
  std::vector<std::size_t> order(M);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return av[a] > av[b]; });

  // Walk the measure line once: layer k occupies the next V[order[k]] of
  // measure; node shell j covers the next V[j]. Nodal value = p-power mean of
  // the layer cake over the shell (exact permutation when measures align).
  std::vector<double> out(M, 0.0);
  std::size_t k = 0;
  double layer_left = V[order[0]];
  for (std::size_t j = 0; j < M; ++j) {
    double shell_left = V[j];
    double acc = 0.0;
    bool single_layer_exact = layer_left >= shell_left;
    const double first_value = (k < M) ? av[order[k]] : 0.0;
    while (shell_left > 0.0 && k < M) {
      const double take = std::min(shell_left, layer_left);
      const double v = av[order[k]];
      acc += take * (p_preserve == 1.0 ? v : std::pow(v, p_preserve));
      shell_left -= take;
      layer_left -= take;
      if (layer_left <= 0.0) {
        ++k;
        if (k < M) layer_left = V[order[k]];
      }
    }
    if (single_layer_exact) {
      out[j] = first_value;  // shell covered by one layer: copy, no rounding
    } else {
      const double mean = acc / V[j];
      out[j] = p_preserve == 1.0 ? mean : std::pow(mean, 1.0 / p_preserve);
    }
    if (j > 0 && out[j] > out[j - 1]) out[j] = out[j - 1];  // clamp ulp wiggle
  }
  return u.with_values(std::move(out));
}

}  // namespace fracp

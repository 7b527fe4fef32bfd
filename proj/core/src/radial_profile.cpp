#include "fracp/radial_profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fracp/errors.hpp"
#include "fracp/numerics.hpp"

namespace fracp {

std::vector<double> make_graded_nodes(const GridSpec& spec) {
  if (spec.M < 16) throw DomainError("grid M = " + std::to_string(spec.M) + " violates M >= 16");
  if (!(spec.rmax > 1.0)) throw DomainError("grid rmax must exceed 1");
  if (!(spec.grading_ratio > 0.0 && spec.grading_ratio < 1.0))
    throw DomainError("grading_ratio must lie in (0, 1)");
  if (!(spec.r_floor > 0.0 && spec.r_floor < 1.0))
    throw DomainError("r_floor must lie in (0, 1)");

  // Geometric nodes gamma^k descending from 1 until r_floor; small grids cap
  // the graded part at 60% of M and grade as deep as that allows.
  const int k_cap = std::max(4, (spec.M * 3) / 5);
  std::vector<double> geo;
  double r = 1.0;
  while (r > spec.r_floor && static_cast<int>(geo.size()) < k_cap) {
    geo.push_back(r);
    r *= spec.grading_ratio;
  }
  const int K = static_cast<int>(geo.size());  // nodes in (r_floor, 1]
  const int uniform_intervals = spec.M - 1 - K;
  if (uniform_intervals < 8)
    throw DomainError("grid M too small for the requested grading (need " +
                      std::to_string(K + 9) + " nodes)");

  std::vector<double> nodes;
  nodes.reserve(spec.M);
  nodes.push_back(0.0);
  for (int k = K - 1; k >= 0; --k) nodes.push_back(geo[k]);
  const double h = (spec.rmax - 1.0) / uniform_intervals;
  for (int i = 1; i <= uniform_intervals; ++i) nodes.push_back(1.0 + h * i);
  nodes.back() = spec.rmax;
  return nodes;
}

RadialProfile::RadialProfile(std::vector<double> nodes, std::vector<double> values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  if (nodes_.size() < 4) throw DomainError("RadialProfile needs at least 4 nodes");
  if (nodes_.size() != values_.size())
    throw DomainError("RadialProfile nodes/values size mismatch");
  if (nodes_.front() != 0.0) throw DomainError("RadialProfile first node must be r = 0");
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i)
    if (!(nodes_[i] < nodes_[i + 1]))
      throw DomainError("RadialProfile nodes must be strictly increasing (index " +
                        std::to_string(i + 1) + ")");
  for (double v : nodes_)
    if (!std::isfinite(v)) throw DomainError("RadialProfile nodes must be finite");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("RadialProfile values must be finite");
  compute_slopes();
}

RadialProfile RadialProfile::from_function(std::vector<double> nodes,
                                           const std::function<double(double)>& f) {
  std::vector<double> vals(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) vals[i] = f(nodes[i]);
  return RadialProfile(std::move(nodes), std::move(vals));
}

void RadialProfile::compute_slopes() {
  const std::size_t n = nodes_.size();
  slopes_.assign(n, 0.0);
  // Slope of the local quadratic fit; one-sided fits at the ends.
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = nodes_[i] - nodes_[i - 1];
    const double hp = nodes_[i + 1] - nodes_[i];
    slopes_[i] = -hp / (hm * (hm + hp)) * values_[i - 1] +
                 (hp - hm) / (hm * hp) * values_[i] +
                 hm / (hp * (hm + hp)) * values_[i + 1];
  }
  {
    const double h0 = nodes_[1] - nodes_[0];
    const double h1 = nodes_[2] - nodes_[1];
    slopes_[0] = -(2.0 * h0 + h1) / (h0 * (h0 + h1)) * values_[0] +
                 (h0 + h1) / (h0 * h1) * values_[1] -
                 h0 / (h1 * (h0 + h1)) * values_[2];
  }
  {
    const std::size_t m = n - 1;
    const double h1 = nodes_[m - 1] - nodes_[m - 2];
    const double h0 = nodes_[m] - nodes_[m - 1];
    slopes_[m] = h0 / (h1 * (h0 + h1)) * values_[m - 2] -
                 (h0 + h1) / (h1 * h0) * values_[m - 1] +
                 (2.0 * h0 + h1) / (h0 * (h0 + h1)) * values_[m];
  }
}

std::size_t RadialProfile::segment_of(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  if (i == 0) return 0;
  if (i >= nodes_.size()) return nodes_.size() - 2;
  return i - 1;
}

double RadialProfile::operator()(double r) const {
  r = std::abs(r);
  if (r > rmax()) return 0.0;
  if (r == rmax()) return values_.back();
  const std::size_t i = segment_of(r);
  const double h = nodes_[i + 1] - nodes_[i];
  const double t = (r - nodes_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * values_[i] + h * h10 * slopes_[i] + h01 * values_[i + 1] +
         h * h11 * slopes_[i + 1];
}

double RadialProfile::derivative(double r) const {
  r = std::abs(r);
  if (r >= rmax()) return 0.0;
  const std::size_t i = segment_of(r);
  const double h = nodes_[i + 1] - nodes_[i];
  const double t = (r - nodes_[i]) / h;
  const double t2 = t * t;
  const double d00 = (6 * t2 - 6 * t) / h;
  const double d10 = 3 * t2 - 4 * t + 1;
  const double d01 = (-6 * t2 + 6 * t) / h;
  const double d11 = 3 * t2 - 2 * t;
  return d00 * values_[i] + d10 * slopes_[i] + d01 * values_[i + 1] +
         d11 * slopes_[i + 1];
}

RadialProfile RadialProfile::with_values(std::vector<double> values) const {
  return RadialProfile(nodes_, std::move(values));
}

RadialProfile::Stencil RadialProfile::stencil(double r) const {
  Stencil st;
  r = std::abs(r);
  if (r > rmax()) return st;  // zero footprint
  const std::size_t n = nodes_.size();
  const std::size_t i = (r == rmax()) ? n - 2 : segment_of(r);
  const double h = nodes_[i + 1] - nodes_[i];
  const double t = (r - nodes_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = (t3 - 2 * t2 + t) * h;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = (t3 - t2) * h;

  st.base = static_cast<int>(std::min(std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - 1),
                                      static_cast<std::ptrdiff_t>(n) - 4));
  auto add = [&](std::size_t node, double coeff) {
    st.c[node - st.base] += coeff;
  };
  add(i, h00);
  add(i + 1, h01);
  // Fold the quadratic-fit slope weights into nodal coefficients.
  auto add_slope = [&](std::size_t j, double coeff) {
    if (coeff == 0.0) return;
    if (j == 0) {
      const double a0 = nodes_[1] - nodes_[0];
      const double a1 = nodes_[2] - nodes_[1];
      add(0, coeff * (-(2.0 * a0 + a1) / (a0 * (a0 + a1))));
      add(1, coeff * ((a0 + a1) / (a0 * a1)));
      add(2, coeff * (-a0 / (a1 * (a0 + a1))));
    } else if (j == n - 1) {
      const double a1 = nodes_[j - 1] - nodes_[j - 2];
      const double a0 = nodes_[j] - nodes_[j - 1];
      add(j - 2, coeff * (a0 / (a1 * (a0 + a1))));
      add(j - 1, coeff * (-(a0 + a1) / (a1 * a0)));
      add(j, coeff * ((2.0 * a0 + a1) / (a0 * (a0 + a1))));
    } else {
      const double hm = nodes_[j] - nodes_[j - 1];
      const double hp = nodes_[j + 1] - nodes_[j];
      add(j - 1, coeff * (-hp / (hm * (hm + hp))));
      add(j, coeff * ((hp - hm) / (hm * hp)));
      add(j + 1, coeff * (hm / (hp * (hm + hp))));
    }
  };
  add_slope(i, h10);
  add_slope(i + 1, h11);
  return st;
}

double RadialProfile::second_difference_seminorm() const {
  double best = 0.0;
  for (std::size_t i = 1; i + 1 < nodes_.size(); ++i) {
    const double hm = nodes_[i] - nodes_[i - 1];
    const double hp = nodes_[i + 1] - nodes_[i];
    const double dd = (values_[i + 1] - values_[i]) / hp -
                      (values_[i] - values_[i - 1]) / hm;
    best = std::max(best, std::abs(2.0 * dd / (hm + hp)));
  }
  return best;
}

double RadialProfile::max_abs_value() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

std::uint64_t RadialProfile::grid_hash() const {
  std::uint64_t h = fnv1a64(nodes_);
  const std::size_t n = nodes_.size();
  return fnv1a64(&n, sizeof(n), h);
}

RadialProfile dilate(const RadialProfile& u, double sigma) {
  if (!(sigma > 0.0))
    throw DomainError("dilation factor sigma = " + std::to_string(sigma) +
                      " violates sigma > 0");
  std::vector<double> nodes(u.nodes());
  for (double& r : nodes) r *= sigma;
  nodes[0] = 0.0;
  return RadialProfile(std::move(nodes), u.values());
}

void store_profile(const RadialProfile& u, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "r,u\n";
  char buf[64];
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", u.nodes()[i], u.values()[i]);
    out << buf;
  }
  if (!out) throw Error("write failure on '" + path + "'");
}

RadialProfile load_profile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line)) throw SchemaError("empty profile file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "r,u")
    throw SchemaError("profile file '" + path + "' missing 'r,u' header (found '" +
                      line + "')");
  std::vector<double> nodes, values;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    double r = std::strtod(s, &end);
    if (end == s || *end != ',')
      throw ParseError("malformed profile row '" + line + "'", lineno);
    const char* s2 = end + 1;
    double v = std::strtod(s2, &end);
    if (end == s2) throw ParseError("malformed profile row '" + line + "'", lineno);
    if (!nodes.empty() && !(r > nodes.back()))
      throw ParseError("non-monotone r column (r = " + std::to_string(r) + ")", lineno);
    nodes.push_back(r);
    values.push_back(v);
  }
  if (nodes.size() < 4) throw SchemaError("profile file '" + path + "' has fewer than 4 rows");
  return RadialProfile(std::move(nodes), std::move(values));
}

}  // namespace fracp

// Radial function representation: nodal values on a graded radial grid with
// local C^1 piecewise-cubic interpolation, extended by zero beyond the
// truncation radius.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fracp {

// Grid construction knobs: nodes grade geometrically toward 0 below r = 1
// (ratio grading_ratio, stopping near r_floor) and are uniform on [1, rmax].
struct GridSpec {
  int M = 256;                 // total node count
  double rmax = 40.0;          // truncation radius
  double grading_ratio = 0.91; // geometric ratio of the sub-unit part
  double r_floor = 1e-4;       // smallest positive node target
};

std::vector<double> make_graded_nodes(const GridSpec& spec);

class RadialProfile {
public:
  // nodes must be strictly increasing with nodes[0] == 0 and size >= 4;
  // rmax is nodes.back(). The function evaluates to 0 for r > rmax.
  RadialProfile(std::vector<double> nodes, std::vector<double> values);

  static RadialProfile from_function(std::vector<double> nodes,
                                     const std::function<double(double)>& f);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }
  double rmax() const { return nodes_.back(); }

  // Interpolated value at r >= 0; 0 beyond rmax.
  double operator()(double r) const;

  // d/dr of the interpolant; 0 beyond rmax.
  double derivative(double r) const;

  // Same grid, new nodal values.
  RadialProfile with_values(std::vector<double> values) const;

  // Linear footprint of an evaluation: u(r) = sum_k c[k] * values[base + k].
  struct Stencil {
    int base = 0;
    std::array<double, 4> c{0, 0, 0, 0};
  };
  Stencil stencil(double r) const;

  static double apply_stencil(const Stencil& st, std::span<const double> values) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += st.c[k] * values[st.base + k];
    return s;
  }

  // max_i |second divided difference| * 2, a discrete curvature bound used to
  // screen inputs before pointwise operator evaluation.
  double second_difference_seminorm() const;

  double max_abs_value() const;

  // Hash of the node set (grid identity for kernel compatibility checks).
  std::uint64_t grid_hash() const;

private:
  void compute_slopes();
  std::size_t segment_of(double r) const;

  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

// T_sigma u (x) = u(x / sigma): exact nodal relocation, values unchanged,
// rmax' = sigma * rmax. Throws DomainError if sigma <= 0.
RadialProfile dilate(const RadialProfile& u, double sigma);

// CSV serialization with header "r,u", one row per node, round-trip lossless.
void store_profile(const RadialProfile& u, const std::string& path);
RadialProfile load_profile(const std::string& path);

}  // namespace fracp

// Uniform N=2 tensor grid over [-L, L]^2, used as brute-force oracle domain
// and as Schwarz symmetrization input.
#pragma once

#include <functional>
#include <string>
#include <vector>

namespace fracp {

class PlanarGrid {
public:
  // n nodes per axis (n >= 2) at x_i = -L + i * 2L/(n-1); values row-major
  // (index ix * n + iy).
  PlanarGrid(double L, int n, std::vector<double> values);

  static PlanarGrid from_function(double L, int n,
                                  const std::function<double(double, double)>& f);

  double L() const { return L_; }
  int n() const { return n_; }
  double spacing() const { return 2.0 * L_ / (n_ - 1); }
  double cell_area() const { return spacing() * spacing(); }
  double coord(int i) const { return -L_ + spacing() * i; }
  const std::vector<double>& values() const { return values_; }
  double at(int ix, int iy) const { return values_[static_cast<std::size_t>(ix) * n_ + iy]; }

  void store(const std::string& path) const;
  static PlanarGrid load(const std::string& path);

private:
  double L_;
  int n_;
  std::vector<double> values_;
};

}  // namespace fracp

#include "fracp/planar_grid.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "fracp/errors.hpp"

namespace fracp {

PlanarGrid::PlanarGrid(double L, int n, std::vector<double> values)
    : L_(L), n_(n), values_(std::move(values)) {
  if (!(L > 0.0)) throw DomainError("PlanarGrid half-width L must be positive");
  if (n < 2) throw DomainError("PlanarGrid resolution n must be >= 2");
  if (values_.size() != static_cast<std::size_t>(n) * n)
    throw DomainError("PlanarGrid values size must be n*n");
  for (double v : values_)
    if (!std::isfinite(v)) throw DomainError("PlanarGrid values must be finite");
}

PlanarGrid PlanarGrid::from_function(double L, int n,
                                     const std::function<double(double, double)>& f) {
  std::vector<double> vals(static_cast<std::size_t>(n) * n);
  const double h = 2.0 * L / (n - 1);
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      vals[static_cast<std::size_t>(ix) * n + iy] = f(-L + h * ix, -L + h * iy);
  return PlanarGrid(L, n, std::move(vals));
}

void PlanarGrid::store(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  char buf[64];
  std::snprintf(buf, sizeof(buf), "L=%.17g\n", L_);
  out << buf;
  out << "n=" << n_ << "\n";
  for (int ix = 0; ix < n_; ++ix) {
    for (int iy = 0; iy < n_; ++iy) {
      std::snprintf(buf, sizeof(buf), "%.17g", at(ix, iy));
      out << buf << (iy + 1 == n_ ? "\n" : ",");
    }
  }
  if (!out) throw Error("write failure on '" + path + "'");
}

PlanarGrid PlanarGrid::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line) || line.rfind("L=", 0) != 0)
    throw SchemaError("PlanarGrid file '" + path + "' missing 'L=' header");
  const double L = std::strtod(line.c_str() + 2, nullptr);
  if (!std::getline(in, line) || line.rfind("n=", 0) != 0)
    throw SchemaError("PlanarGrid file '" + path + "' missing 'n=' header");
  const int n = std::atoi(line.c_str() + 2);
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(n) * n);
  std::size_t lineno = 2;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const char* s = line.c_str();
    char* end = nullptr;
    while (*s) {
      double v = std::strtod(s, &end);
      if (end == s) throw ParseError("malformed PlanarGrid row", lineno);
      vals.push_back(v);
      s = (*end == ',') ? end + 1 : end;
    }
  }
  return PlanarGrid(L, n, std::move(vals));
}

}  // namespace fracp

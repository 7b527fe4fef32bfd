#include "fracp/angular_kernel.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <thread>

#include "fracp/errors.hpp"

namespace fracp {

int resolve_thread_count(int requested) {
  int n = requested;
  if (n <= 0) {
    n = static_cast<int>(std::thread::hardware_concurrency());
    if (n <= 0) n = 1;
  }
  if (const char* env = std::getenv("FRACP_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, cap);
  }
  return std::max(1, n);
}

namespace detail {

PairRule build_pair_rule(const RadialProfile& grid, const PairRuleOptions& opt) {
  const auto& r = grid.nodes();
  const int M = static_cast<int>(r.size());
  const GaussRule& go = gauss_legendre(opt.outer_gl);
  const GaussRule& gc = gauss_legendre(opt.cell_gl);
  const GaussRule& gd = gauss_legendre(opt.diag_gl);

  PairRule rule;
  rule.outer.reserve(static_cast<std::size_t>(M - 1) * opt.outer_gl);

  auto add_inner_panel = [&](PairRule& out, double a, double b, const GaussRule& g) {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < g.x.size(); ++i) {
      PairRule::Inner in;
      in.rho = mid + half * g.x[i];
      in.gw = g.w[i] * half;
      in.st = grid.stencil(in.rho);
      out.inner.push_back(in);
    }
  };

  for (int ci = 0; ci < M - 1; ++ci) {
    const double a = r[ci], b = r[ci + 1];
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t oi = 0; oi < go.x.size(); ++oi) {
      PairRule::Outer o;
      o.r = mid + half * go.x[oi];
      o.gw = go.w[oi] * half;
      o.st = grid.stencil(o.r);
      o.begin = static_cast<std::uint32_t>(rule.inner.size());

      const int dlo = std::max(0, ci - 1);
      const int dhi = std::min(M - 1, ci + 2);  // diagonal block [r_dlo, r_dhi]
      for (int cj = 0; cj + 1 < M; ++cj) {
        if (cj >= dlo && cj < dhi) continue;  // handled by the graded block
        add_inner_panel(rule, r[cj], r[cj + 1], gc);
      }
      // Graded panels toward rho = o.r from both sides of the diagonal block.
      const double wl = o.r - r[dlo];
      const double wr = r[dhi] - o.r;
      for (int k = 0; k < opt.diag_depth; ++k) {
        const double f1 = std::ldexp(1.0, -k);      // 2^-k
        const double f2 = std::ldexp(1.0, -k - 1);  // 2^-(k+1)
        if (wl > 0.0) add_inner_panel(rule, o.r - wl * f1, o.r - wl * f2, gd);
        if (wr > 0.0) add_inner_panel(rule, o.r + wr * f2, o.r + wr * f1, gd);
      }
      o.end = static_cast<std::uint32_t>(rule.inner.size());
      rule.outer.push_back(o);
    }
  }
  return rule;
}

}  // namespace detail

namespace {

double tail_integral(int N, double sp, double r, double rmax, int panels) {
  // int_rmax^inf rho^{N-1} K(r, rho) d rho via geometric doubling panels plus
  // the asymptotic remainder K ~ |S^{N-1}| rho^{-(N+sp)}.
  const GaussRule& gl = gauss_legendre(4);
  double acc = 0.0;
  double lo = rmax;
  for (int k = 0; k < panels; ++k) {
    const double hi = 2.0 * lo;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < gl.x.size(); ++i) {
      const double rho = mid + half * gl.x[i];
      acc += gl.w[i] * half * ipow(rho, N - 1) *
             angular_kernel_integral(N, sp, r, rho);
    }
    lo = hi;
  }
  acc += unit_sphere_area(N - 1) * std::pow(lo, -sp) / sp;
  return acc;
}

void bake_rule(const detail::PairRule& geo, int N, double sp, double rmax,
               int tail_panels, int threads, AngularKernel::Rule& out) {
  const std::size_t n_outer = geo.outer.size();
  out.outer.resize(n_outer);
  out.inner.resize(geo.inner.size());

  auto work = [&](std::size_t o_begin, std::size_t o_end) {
    for (std::size_t oi = o_begin; oi < o_end; ++oi) {
      const auto& go = geo.outer[oi];
      auto& bo = out.outer[oi];
      bo.r = go.r;
      bo.w = go.gw * ipow(go.r, N - 1);
      bo.st = go.st;
      bo.begin = go.begin;
      bo.end = go.end;
      bo.tail = tail_integral(N, sp, go.r, rmax, tail_panels);
      for (std::uint32_t q = go.begin; q < go.end; ++q) {
        const auto& gi = geo.inner[q];
        auto& bi = out.inner[q];
        bi.rho = gi.rho;
        bi.st = gi.st;
        bi.w = gi.gw * ipow(gi.rho, N - 1) *
               angular_kernel_integral(N, sp, go.r, gi.rho);
      }
    }
  };

  if (threads <= 1) {
    work(0, n_outer);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n_outer + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t b = std::min(n_outer, t * chunk);
    const std::size_t e = std::min(n_outer, b + chunk);
    if (b < e) pool.emplace_back(work, b, e);
  }
  for (auto& th : pool) th.join();
}

std::uint64_t kernel_content_hash(const Params& params, const RadialProfile& grid,
                                  const KernelOptions& opt) {
  std::uint64_t h = fnv1a64(&params.N, sizeof(params.N));
  h = fnv1a64(&params.s, sizeof(double), h);
  h = fnv1a64(&params.p, sizeof(double), h);
  const std::uint64_t gh = grid.grid_hash();
  h = fnv1a64(&gh, sizeof(gh), h);
  const int fields[8] = {opt.fine.outer_gl,   opt.fine.cell_gl,
                         opt.fine.diag_depth, opt.fine.diag_gl,
                         opt.coarse.outer_gl, opt.coarse.cell_gl,
                         opt.coarse.diag_depth, opt.coarse.diag_gl};
  h = fnv1a64(fields, sizeof(fields), h);
  h = fnv1a64(&opt.tail_panels, sizeof(int), h);
  return h;
}

constexpr char kMagic[8] = {'F', 'R', 'A', 'C', 'K', 'R', 'N', '1'};

template <class T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
void read_pod(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
}

void write_rule(std::ofstream& out, const AngularKernel::Rule& rule) {
  write_pod(out, static_cast<std::uint64_t>(rule.outer.size()));
  write_pod(out, static_cast<std::uint64_t>(rule.inner.size()));
  for (const auto& o : rule.outer) write_pod(out, o);
  for (const auto& i : rule.inner) write_pod(out, i);
}

void read_rule(std::ifstream& in, AngularKernel::Rule& rule) {
  std::uint64_t no = 0, ni = 0;
  read_pod(in, no);
  read_pod(in, ni);
  rule.outer.resize(no);
  rule.inner.resize(ni);
  for (auto& o : rule.outer) read_pod(in, o);
  for (auto& i : rule.inner) read_pod(in, i);
}

}  // namespace

AngularKernel AngularKernel::build(const Params& params, const RadialProfile& grid,
                                   const KernelOptions& opt) {
  AngularKernel k;
  k.N_ = params.N;
  k.s_ = params.s;
  k.p_ = params.p;
  k.grid_hash_ = grid.grid_hash();
  k.content_hash_ = kernel_content_hash(params, grid, opt);
  k.grid_nodes_ = grid.nodes();
  const int threads = resolve_thread_count(opt.threads);
  const double sp = params.sp();
  const auto fine_geo = detail::build_pair_rule(grid, opt.fine);
  const auto coarse_geo = detail::build_pair_rule(grid, opt.coarse);
  bake_rule(fine_geo, params.N, sp, grid.rmax(), opt.tail_panels, threads, k.fine_);
  bake_rule(coarse_geo, params.N, sp, grid.rmax(), opt.tail_panels, threads,
            k.coarse_);
  return k;
}

void AngularKernel::require_match(const RadialProfile& u) const {
  if (!matches(u))
    throw KernelMismatch("profile node set differs from the kernel's grid");
}

void AngularKernel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(kMagic, sizeof(kMagic));
  write_pod(out, content_hash_);
  write_pod(out, grid_hash_);
  write_pod(out, N_);
  write_pod(out, s_);
  write_pod(out, p_);
  write_pod(out, static_cast<std::uint64_t>(grid_nodes_.size()));
  out.write(reinterpret_cast<const char*>(grid_nodes_.data()),
            grid_nodes_.size() * sizeof(double));
  write_rule(out, fine_);
  write_rule(out, coarse_);
  if (!out) throw Error("write failure on '" + path + "'");
}

AngularKernel AngularKernel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw SchemaError("'" + path + "' is not a fracp kernel cache");
  AngularKernel k;
  read_pod(in, k.content_hash_);
  read_pod(in, k.grid_hash_);
  read_pod(in, k.N_);
  read_pod(in, k.s_);
  read_pod(in, k.p_);
  std::uint64_t n = 0;
  read_pod(in, n);
  k.grid_nodes_.resize(n);
  in.read(reinterpret_cast<char*>(k.grid_nodes_.data()), n * sizeof(double));
  read_rule(in, k.fine_);
  read_rule(in, k.coarse_);
  if (!in) throw SchemaError("truncated kernel cache '" + path + "'");
  return k;
}

AngularKernel AngularKernel::load_or_build(const Params& params,
                                           const RadialProfile& grid,
                                           const std::string& cache_dir,
                                           const KernelOptions& opt) {
  if (cache_dir.empty()) return build(params, grid, opt);
  const std::uint64_t h = kernel_content_hash(params, grid, opt);
  char name[64];
  std::snprintf(name, sizeof(name), "kernel_%016llx.bin",
                static_cast<unsigned long long>(h));
  const std::filesystem::path path = std::filesystem::path(cache_dir) / name;
  if (std::filesystem::exists(path)) {
    AngularKernel k = load(path.string());
    if (k.content_hash_ == h) return k;
  }
  AngularKernel k = build(params, grid, opt);
  std::filesystem::create_directories(cache_dir);
  k.save(path.string());
  return k;
}

}  // namespace fracp

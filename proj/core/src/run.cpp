#include "fracp/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fracp/errors.hpp"
#include "fracp/identities.hpp"
#include "fracp/numerics.hpp"
#include "fracp/symmetrization.hpp"
#include "fracp/version.hpp"

namespace fracp {

namespace {

using nlohmann::json;

std::string now_iso8601() {
  const auto t = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(t);
  char buf[32];
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string digest_of_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(data.data(), data.size())));
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write failure on '" + path + "'");
}

json solve_report_to_json(const SolveReport& rep) {
  json trace = json::array();
  for (const auto& t : rep.trace)
    trace.push_back({{"iter", t.iter}, {"a", t.a}, {"b_dev", t.b_dev}, {"step", t.step}});
  return json{{"J_est", rep.J_est},
              {"sigma_bar", rep.sigma_bar},
              {"a_final", rep.a_final},
              {"b_final", rep.b_final},
              {"pohozaev_residual", rep.pohozaev_residual},
              {"lagrange_mismatch", rep.lagrange_mismatch},
              {"weak_residual", rep.weak_residual},
              {"a_ubar", rep.a_ubar},
              {"b_ubar", rep.b_ubar},
              {"zeta", rep.zeta},
              {"R_init", rep.R_init},
              {"iterations", rep.iterations},
              {"termination", rep.termination},
              {"trace", std::move(trace)}};
}

}  // namespace

int selftest(std::ostream& os) {
  int failures = 0;
  auto check = [&](const char* name, bool ok) {
    os << (ok ? "ok   " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };
  auto throws_domain = [](auto&& fn) {
    try {
      fn();
    } catch (const DomainError&) {
      return true;
    } catch (...) {
      return false;
    }
    return false;
  };

  {
    const Params pp = validate(2, 0.5, 2.0);
    check("validate pstar", std::abs(pp.pstar - 4.0) < 1e-14 && pp.pointwise_ok);
    const Params p2 = validate(2, 0.9, 1.5);
    check("validate pointwise screen", !p2.pointwise_ok);
    check("validate rejects p >= N/s",
          throws_domain([] { validate(2, 0.5, 5.0); }));
  }
  {
    GridSpec gs;
    gs.M = 64;
    gs.rmax = 8.0;
    RadialProfile u = RadialProfile::from_function(
        make_graded_nodes(gs), [](double r) { return std::exp(-r * r); });
    const RadialProfile u1 = dilate(u, 1.0);
    check("dilate identity", u1.nodes() == u.nodes() && u1.values() == u.values());
    const Params pp = validate(2, 0.5, 2.0);
    const Nonlinearity nl = make_model(1.0, 3.0, pp);
    const double b1 = potential_b(u, nl, pp);
    const double b2 = potential_b(dilate(u, 2.0), nl, pp);
    check("b dilation covariance", std::abs(b2 / b1 - 4.0) < 1e-10);
  }
  {
    const Params pp = validate(2, 0.5, 2.0);
    check("model rejects q = pstar",
          throws_domain([&] { make_model(1.0, 4.0, pp); }));
    const Nonlinearity nl = make_model(1.0, 3.0, pp);
    const NonlinearityEval e = nl.eval_all(1.0);
    check("eval_all closed forms t=1",
          std::abs(e.g) < 1e-15 && std::abs(e.G + 1.0 / 6.0) < 1e-15 &&
              std::abs(e.g1 - 1.0) < 1e-15 && std::abs(e.g2 - 1.0) < 1e-15 &&
              std::abs(e.G1 - 1.0 / 3.0) < 1e-15 &&
              std::abs(e.G2 - 0.5) < 1e-15);
    const NonlinearityEval z = nl.eval_all(0.0);
    check("eval_all zero at 0",
          z.g == 0 && z.G == 0 && z.g1 == 0 && z.g2 == 0 && z.G1 == 0 && z.G2 == 0);
    const RadialProfile w = initial_guess(nl, pp, 8.0);
    check("w_R piecewise values",
          std::abs(w(8.0) - nl.zeta()) < 1e-12 && std::abs(w(9.0)) < 1e-12 &&
              std::abs(w(8.5) - 0.5 * nl.zeta()) < 1e-12);
  }
  {
    const Params pp = validate(2, 0.5, 2.0);
    check("normalization constant 0.125",
          std::abs(normalization_constant(pp) - 0.125) < 1e-12);
    GridSpec gs;
    gs.M = 64;
    gs.rmax = 20.0;
    RadialProfile c = RadialProfile::from_function(make_graded_nodes(gs),
                                                   [](double) { return 3.0; });
    QuadSpec q;
    q.rcut = 10.0;  // keeps the window inside the plateau
    q.n_inner = 16;
    q.n_outer = 16;
    const FlpResult res = flp_apply(c, 1.0, pp, q);
    check("constant profile maps to zero", res.value == 0.0 && res.tail_bound > 0.0);
  }
  {
    const Params pp = validate(2, 0.5, 2.0);
    GridSpec gs;
    gs.M = 64;
    gs.rmax = 8.0;
    RadialProfile u = RadialProfile::from_function(
        make_graded_nodes(gs), [](double r) { return std::exp(-r * r); });
    const double x[2] = {0.5, 0.0};
    const double z[2] = {0.2, 0.1};
    const double direct = integrand_symmetrized(u, x, z, pp);
    const double zn = std::sqrt(z[0] * z[0] + z[1] * z[1]);
    const double up = u(std::hypot(x[0] + z[0], x[1] + z[1]));
    const double um = u(std::hypot(x[0] - z[0], x[1] - z[1]));
    const double expect = (2.0 * u(0.5) - up - um) / std::pow(zn, pp.N + pp.sp());
    check("p=2 bracket reduction", std::abs(direct - expect) < 1e-14);
  }
  {
    const Params pp = validate(2, 0.5, 2.0);
    const VectorFieldSpec X = make_pure_identity();
    const double x[2] = {0.3, -1.2};
    const double y[2] = {2.0, 0.7};
    const double br = divergence_bracket(X, x, y, pp);
    check("pure identity bracket N-sp", br == 2.0 * pp.N - (pp.N + pp.sp()));
    const double x2[2] = {5.0, 5.0};
    const double y2[2] = {6.0, 4.0};
    const VectorFieldSpec Xc = make_identity_cutoff(1.0);
    check("bracket vanishes outside supp X",
          divergence_bracket(Xc, x2, y2, pp) == 0.0);
  }
  {
    const Params pp = validate(2, 0.5, 2.0);
    const Nonlinearity nl = make_model(1.0, 3.0, pp);
    GridSpec gs;
    gs.M = 48;
    gs.rmax = 8.0;
    RadialProfile z = RadialProfile::from_function(make_graded_nodes(gs),
                                                   [](double) { return 0.0; });
    const EnergyReport rep = potential_energy(z, nl, pp);
    check("potential of zero profile",
          rep.b_value == 0 && rep.b1_value == 0 && rep.b2_value == 0);
    RadialProfile mono = RadialProfile::from_function(
        make_graded_nodes(gs), [](double r) { return std::exp(-r); });
    const RadialProfile sym = symmetrize_radial(mono, pp.N);
    bool same = true;
    for (std::size_t i = 0; i < mono.size(); ++i)
      if (std::abs(sym.values()[i] - mono.values()[i]) > 1e-13) same = false;
    check("rearrangement fixes decreasing profiles", same);
  }
  {
    // sigma_bar inversion: sigma^{sp} N/(N-sp) = J
    const Params pp = validate(2, 0.5, 2.0);
    const double J = 0.7531;
    const double sigma = std::pow((pp.N - pp.sp()) * J / pp.N, 1.0 / pp.sp());
    check("sigma_bar algebra",
          std::abs(std::pow(sigma, pp.sp()) * pp.N / (pp.N - pp.sp()) - J) < 1e-12);
  }
  return failures;
}

RunRecord run(const std::string& command, const RunConfig& cfg,
              const std::string& out_dir) {
  RunRecord rec;
  rec.command = command;
  rec.artifact_version = kVersion;
  rec.started_at = now_iso8601();
  rec.config_echo = config_to_json(cfg);
  std::filesystem::create_directories(out_dir);
  const std::string cache =
      cfg.cache_dir.empty() ? (std::filesystem::path(out_dir) / "kernel_cache").string()
                            : cfg.cache_dir;

  const Params params = cfg.params();
  json payload;
  payload["command"] = command;
  std::vector<std::string> written;

  if (command == "operator") {
    const RadialProfile u = cfg.make_profile(cfg.operator_profile);
    const FlpResult res = flp_apply(u, cfg.operator_x_radius, params, cfg.quad);
    payload["x_radius"] = cfg.operator_x_radius;
    payload["value"] = res.value;
    if (cfg.quad.tail_bound_reported) payload["tail_bound"] = res.tail_bound;
  } else if (command == "energy") {
    const Nonlinearity nl = cfg.nonlinearity();
    const RadialProfile u = cfg.make_profile(cfg.energy_profile);
    const AngularKernel kernel = AngularKernel::load_or_build(params, u, cache);
    EnergyReport rep = gagliardo_energy_report(u, params, kernel);
    const EnergyReport pot = potential_energy(u, nl, params);
    rep.b_value = pot.b_value;
    rep.b1_value = pot.b1_value;
    rep.b2_value = pot.b2_value;
    payload["a"] = rep.a_value;
    payload["b"] = rep.b_value;
    payload["b1"] = rep.b1_value;
    payload["b2"] = rep.b2_value;
    payload["diag_band_estimate"] = rep.diag_band_estimate;
    payload["quad_residual"] = rep.quad_residual;
  } else if (command == "solve") {
    const Nonlinearity nl = cfg.nonlinearity();
    const SolveResult res = solve(nl, params, cfg.solve, cfg.grid, {}, cache);
    payload["report"] = solve_report_to_json(res.report);
    const std::string min_csv = (std::filesystem::path(out_dir) / "minimizer.csv").string();
    const std::string ubar_csv = (std::filesystem::path(out_dir) / "ubar.csv").string();
    store_profile(res.minimizer, min_csv);
    store_profile(res.ubar, ubar_csv);
    written.push_back(min_csv);
    written.push_back(ubar_csv);
  } else if (command == "pohozaev") {
    const Nonlinearity nl = cfg.nonlinearity();
    const RadialProfile u = cfg.make_profile(cfg.pohozaev_profile);
    const AngularKernel kernel = AngularKernel::load_or_build(params, u, cache);
    const double a = gagliardo_energy(u, params, kernel);
    const double b = potential_b(u, nl, params);
    const double P = (params.N - params.sp()) * a - params.N * b;
    payload["a"] = a;
    payload["b"] = b;
    payload["P"] = P;
    payload["normalized"] = P / ((params.N - params.sp()) * a);
  } else if (command == "ibp-check") {
    const RadialProfile u = cfg.make_profile(cfg.ibp_profile);
    const VectorFieldSpec X = make_identity_cutoff(cfg.ibp_lambda);
    const IdentityReport rep = ibp_check(u, X, params, cfg.quad);
    payload["lambda"] = cfg.ibp_lambda;
    payload["lhs"] = rep.lhs;
    payload["rhs"] = rep.rhs;
    payload["rel_residual"] = rep.rel_residual;
    payload["bracket_min"] = rep.bracket_min;
    payload["bracket_max"] = rep.bracket_max;
  } else if (command == "limit-study") {
    const Nonlinearity nl = cfg.nonlinearity();
    const RadialProfile u = cfg.make_profile(cfg.limit_profile);
    const auto rows = cutoff_limit_study(u, nl, params, cfg.limit_lambdas);
    json jr = json::array();
    for (const auto& row : rows)
      jr.push_back({{"lambda", row.lambda},
                    {"lhs", row.lhs},
                    {"g_term", row.g_term},
                    {"lambda_term", row.lambda_term}});
    payload["rows"] = std::move(jr);
  } else if (command == "selftest") {
    std::ostringstream os;
    const int failures = selftest(os);
    payload["output"] = os.str();
    payload["failures"] = failures;
    if (failures > 0) {
      rec.report_json = payload.dump(2) + "\n";
      write_text((std::filesystem::path(out_dir) / "report.json").string(),
                 rec.report_json);
      throw DomainError(std::to_string(failures) + " selftest check(s) failed");
    }
  } else {
    throw ConfigError("unknown command '" + command + "'", "command");
  }

  rec.report_json = payload.dump(2) + "\n";
  const std::string report_path =
      (std::filesystem::path(out_dir) / "report.json").string();
  write_text(report_path, rec.report_json);
  written.insert(written.begin(), report_path);

  rec.finished_at = now_iso8601();
  for (const auto& w : written) rec.file_digests.emplace_back(w, digest_of_file(w));

  json jrun;
  jrun["command"] = rec.command;
  jrun["artifact_version"] = rec.artifact_version;
  jrun["started_at"] = rec.started_at;
  jrun["finished_at"] = rec.finished_at;
  jrun["config"] = json::parse(rec.config_echo);
  json digests = json::object();
  for (const auto& [path, dig] : rec.file_digests)
    digests[std::filesystem::path(path).filename().string()] = dig;
  jrun["file_digests"] = std::move(digests);
  write_text((std::filesystem::path(out_dir) / "run.json").string(),
             jrun.dump(2) + "\n");
  return rec;
}

int run_cli(const std::string& command, const std::string& config_path,
            const std::string& out_dir, std::ostream& diag) {
  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = parse_config_file(config_path);
    const RunRecord rec = run(command, cfg, out_dir);
    diag << rec.report_json;
    return 0;
  } catch (const ConfigError& e) {
    diag << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConstraintError& e) {
    diag << "constraint error: " << e.what() << "\n";
    return 2;
  } catch (const PointwiseUnsupported& e) {
    diag << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    diag << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const SchemaError& e) {
    diag << "schema error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    diag << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const KernelMismatch& e) {
    diag << "kernel mismatch: " << e.what() << "\n";
    return 2;
  } catch (const SolverDiverged& e) {
    diag << "solver diverged: " << e.what() << "\n";
    return 3;
  } catch (const QuadratureError& e) {
    diag << "quadrature error: " << e.what() << "\n";
    return 3;
  } catch (const StepFailure& e) {
    diag << "step failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    diag << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    diag << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace fracp

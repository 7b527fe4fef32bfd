#include "fracp/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fracp/errors.hpp"

namespace fracp {

namespace {

using nlohmann::json;

void require_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError("expected an object", path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "'",
                        path.empty() ? it.key() : path + "." + it.key());
  }
}

template <class T>
void get_to(const json& j, const std::string& path, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    j.at(key).get_to(out);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value: ") + e.what(), path + "." + key);
  }
}

ProfileSpec parse_profile(const json& j, const std::string& path) {
  require_keys(j, path, {"kind", "path", "amplitude", "width", "radius", "center", "R"});
  ProfileSpec p;
  std::string kind = "gaussian";
  get_to(j, path, "kind", kind);
  if (kind == "csv") p.kind = ProfileSpec::Kind::csv;
  else if (kind == "gaussian") p.kind = ProfileSpec::Kind::gaussian;
  else if (kind == "tent") p.kind = ProfileSpec::Kind::tent;
  else if (kind == "ring") p.kind = ProfileSpec::Kind::ring;
  else if (kind == "initializer") p.kind = ProfileSpec::Kind::initializer;
  else throw ConfigError("unknown profile kind '" + kind + "'", path + ".kind");
  get_to(j, path, "path", p.path);
  get_to(j, path, "amplitude", p.amplitude);
  get_to(j, path, "width", p.width);
  get_to(j, path, "radius", p.radius);
  get_to(j, path, "center", p.center);
  get_to(j, path, "R", p.R);
  if (p.kind == ProfileSpec::Kind::csv && p.path.empty())
    throw ConfigError("csv profile needs a path", path + ".path");
  return p;
}

json profile_to_json(const ProfileSpec& p) {
  const char* kind = "gaussian";
  switch (p.kind) {
    case ProfileSpec::Kind::csv: kind = "csv"; break;
    case ProfileSpec::Kind::gaussian: kind = "gaussian"; break;
    case ProfileSpec::Kind::tent: kind = "tent"; break;
    case ProfileSpec::Kind::ring: kind = "ring"; break;
    case ProfileSpec::Kind::initializer: kind = "initializer"; break;
  }
  return json{{"kind", kind},     {"path", p.path},     {"amplitude", p.amplitude},
              {"width", p.width}, {"radius", p.radius}, {"center", p.center},
              {"R", p.R}};
}

}  // namespace

Params RunConfig::params() const { return validate(N, s, p); }

Nonlinearity RunConfig::nonlinearity() const {
  const Params pp = params();
  if (family == "two_power") return make_model(m, q, pp);
  if (family == "bounded_tail") return make_bounded_tail(m, q, pp, splice_T);
  throw ConfigError("unknown nonlinearity family '" + family + "'",
                    "nonlinearity.family");
}

RadialProfile RunConfig::make_profile(const ProfileSpec& spec) const {
  if (spec.kind == ProfileSpec::Kind::csv) return load_profile(spec.path);
  if (spec.kind == ProfileSpec::Kind::initializer)
    return initial_guess(nonlinearity(), params(), spec.R, grid);
  std::vector<double> nodes = make_graded_nodes(grid);
  const double A = spec.amplitude;
  switch (spec.kind) {
    case ProfileSpec::Kind::gaussian:
      return RadialProfile::from_function(std::move(nodes), [&](double r) {
        const double t = r / spec.width;
        return A * std::exp(-t * t);
      });
    case ProfileSpec::Kind::tent:
      return RadialProfile::from_function(std::move(nodes), [&](double r) {
        return A * std::max(0.0, 1.0 - r / spec.radius);
      });
    case ProfileSpec::Kind::ring:
      return RadialProfile::from_function(std::move(nodes), [&](double r) {
        const double t = (r - spec.center) / spec.width;
        return A * std::exp(-t * t);
      });
    default:
      throw Error("unreachable profile kind");
  }
}

RunConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("not valid JSON: ") + e.what(), "<root>");
  }
  require_keys(j, "", {"params", "nonlinearity", "grid", "quad", "solve",
                       "cache_dir", "operator", "energy", "pohozaev", "ibp",
                       "limit_study"});
  RunConfig cfg;
  if (!j.contains("params")) throw ConfigError("missing required block", "params");
  {
    const json& b = j.at("params");
    require_keys(b, "params", {"N", "s", "p"});
    get_to(b, "params", "N", cfg.N);
    get_to(b, "params", "s", cfg.s);
    get_to(b, "params", "p", cfg.p);
  }
  if (j.contains("nonlinearity")) {
    const json& b = j.at("nonlinearity");
    require_keys(b, "nonlinearity", {"family", "m", "q", "splice_T"});
    get_to(b, "nonlinearity", "family", cfg.family);
    get_to(b, "nonlinearity", "m", cfg.m);
    get_to(b, "nonlinearity", "q", cfg.q);
    get_to(b, "nonlinearity", "splice_T", cfg.splice_T);
  }
  if (j.contains("grid")) {
    const json& b = j.at("grid");
    require_keys(b, "grid", {"M", "rmax", "grading_ratio", "r_floor"});
    get_to(b, "grid", "M", cfg.grid.M);
    get_to(b, "grid", "rmax", cfg.grid.rmax);
    get_to(b, "grid", "grading_ratio", cfg.grid.grading_ratio);
    get_to(b, "grid", "r_floor", cfg.grid.r_floor);
  }
  if (j.contains("quad")) {
    const json& b = j.at("quad");
    require_keys(b, "quad", {"delta", "rcut", "n_inner", "n_outer", "n_angular",
                             "tail_bound_reported"});
    get_to(b, "quad", "delta", cfg.quad.delta);
    get_to(b, "quad", "rcut", cfg.quad.rcut);
    get_to(b, "quad", "n_inner", cfg.quad.n_inner);
    get_to(b, "quad", "n_outer", cfg.quad.n_outer);
    get_to(b, "quad", "n_angular", cfg.quad.n_angular);
    get_to(b, "quad", "tail_bound_reported", cfg.quad.tail_bound_reported);
  }
  if (j.contains("solve")) {
    const json& b = j.at("solve");
    require_keys(b, "solve",
                 {"max_iters", "step0", "step_shrink", "step_grow", "grad_tol",
                  "energy_tol", "symmetrize_every", "deterministic"});
    get_to(b, "solve", "max_iters", cfg.solve.max_iters);
    get_to(b, "solve", "step0", cfg.solve.step0);
    get_to(b, "solve", "step_shrink", cfg.solve.step_shrink);
    get_to(b, "solve", "step_grow", cfg.solve.step_grow);
    get_to(b, "solve", "grad_tol", cfg.solve.grad_tol);
    get_to(b, "solve", "energy_tol", cfg.solve.energy_tol);
    get_to(b, "solve", "symmetrize_every", cfg.solve.symmetrize_every);
    get_to(b, "solve", "deterministic", cfg.solve.deterministic);
  }
  get_to(j, "", "cache_dir", cfg.cache_dir);
  if (j.contains("operator")) {
    const json& b = j.at("operator");
    require_keys(b, "operator", {"x_radius", "profile"});
    get_to(b, "operator", "x_radius", cfg.operator_x_radius);
    if (b.contains("profile"))
      cfg.operator_profile = parse_profile(b.at("profile"), "operator.profile");
  }
  if (j.contains("energy")) {
    const json& b = j.at("energy");
    require_keys(b, "energy", {"profile"});
    if (b.contains("profile"))
      cfg.energy_profile = parse_profile(b.at("profile"), "energy.profile");
  }
  if (j.contains("pohozaev")) {
    const json& b = j.at("pohozaev");
    require_keys(b, "pohozaev", {"profile"});
    if (b.contains("profile"))
      cfg.pohozaev_profile = parse_profile(b.at("profile"), "pohozaev.profile");
  }
  if (j.contains("ibp")) {
    const json& b = j.at("ibp");
    require_keys(b, "ibp", {"lambda", "profile"});
    get_to(b, "ibp", "lambda", cfg.ibp_lambda);
    if (b.contains("profile"))
      cfg.ibp_profile = parse_profile(b.at("profile"), "ibp.profile");
  }
  if (j.contains("limit_study")) {
    const json& b = j.at("limit_study");
    require_keys(b, "limit_study", {"lambdas", "profile"});
    if (b.contains("lambdas")) {
      cfg.limit_lambdas.clear();
      get_to(b, "limit_study", "lambdas", cfg.limit_lambdas);
    }
    if (b.contains("profile"))
      cfg.limit_profile = parse_profile(b.at("profile"), "limit_study.profile");
  }
  // Fail fast on invalid numerics.
  cfg.params();
  make_graded_nodes(cfg.grid);
  cfg.quad.validate();
  cfg.solve.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
  json j;
  j["params"] = {{"N", cfg.N}, {"s", cfg.s}, {"p", cfg.p}};
  j["nonlinearity"] = {{"family", cfg.family},
                       {"m", cfg.m},
                       {"q", cfg.q},
                       {"splice_T", cfg.splice_T}};
  j["grid"] = {{"M", cfg.grid.M},
               {"rmax", cfg.grid.rmax},
               {"grading_ratio", cfg.grid.grading_ratio},
               {"r_floor", cfg.grid.r_floor}};
  j["quad"] = {{"delta", cfg.quad.delta},
               {"rcut", cfg.quad.rcut},
               {"n_inner", cfg.quad.n_inner},
               {"n_outer", cfg.quad.n_outer},
               {"n_angular", cfg.quad.n_angular},
               {"tail_bound_reported", cfg.quad.tail_bound_reported}};
  j["solve"] = {{"max_iters", cfg.solve.max_iters},
                {"step0", cfg.solve.step0},
                {"step_shrink", cfg.solve.step_shrink},
                {"step_grow", cfg.solve.step_grow},
                {"grad_tol", cfg.solve.grad_tol},
                {"energy_tol", cfg.solve.energy_tol},
                {"symmetrize_every", cfg.solve.symmetrize_every},
                {"deterministic", cfg.solve.deterministic}};
  j["cache_dir"] = cfg.cache_dir;
  j["operator"] = {{"x_radius", cfg.operator_x_radius},
                   {"profile", profile_to_json(cfg.operator_profile)}};
  j["energy"] = {{"profile", profile_to_json(cfg.energy_profile)}};
  j["pohozaev"] = {{"profile", profile_to_json(cfg.pohozaev_profile)}};
  j["ibp"] = {{"lambda", cfg.ibp_lambda},
              {"profile", profile_to_json(cfg.ibp_profile)}};
  j["limit_study"] = {{"lambdas", cfg.limit_lambdas},
                      {"profile", profile_to_json(cfg.limit_profile)}};
  return j.dump(2);
}

}  // namespace fracp

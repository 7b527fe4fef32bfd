// Run configuration: one JSON document in, strict unknown-key rejection,
// nested blocks mapping onto the module-level types.
#pragma once

#include <string>
#include <vector>

#include "fracp/flp_operator.hpp"
#include "fracp/nonlinearity.hpp"
#include "fracp/radial_profile.hpp"
#include "fracp/solver.hpp"

namespace fracp {

struct ProfileSpec {
  enum class Kind { csv, gaussian, tent, ring, initializer };
  Kind kind = Kind::gaussian;
  std::string path;       // csv
  double amplitude = 1.0;
  double width = 1.0;     // gaussian / ring
  double radius = 2.0;    // tent
  double center = 2.0;    // ring
  double R = 8.0;         // initializer plateau radius
};

struct RunConfig {
  int N = 2;
  double s = 0.5;
  double p = 2.0;

  std::string family = "two_power";
  double m = 1.0;
  double q = 3.0;
  double splice_T = 0.0;

  GridSpec grid;
  QuadSpec quad;
  SolveConfig solve;

  std::string cache_dir;  // kernel sidecar directory ("" = out_dir/kernel_cache)

  double operator_x_radius = 0.0;
  ProfileSpec operator_profile;
  ProfileSpec energy_profile;
  ProfileSpec pohozaev_profile;
  double ibp_lambda = 0.05;
  ProfileSpec ibp_profile;
  std::vector<double> limit_lambdas{0.4, 0.2, 0.1};
  ProfileSpec limit_profile;

  Params params() const;
  Nonlinearity nonlinearity() const;
  // Materializes a profile spec on the configured grid (csv kind loads the file).
  RadialProfile make_profile(const ProfileSpec& spec) const;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Canonical echo of the parsed configuration (deterministic key order).
std::string config_to_json(const RunConfig& cfg);

}  // namespace fracp

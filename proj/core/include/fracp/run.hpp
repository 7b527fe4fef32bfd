// Command dispatch, run persistence, machine-readable reports.
#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fracp/config.hpp"

namespace fracp {

struct RunRecord {
  std::string command;
  std::string artifact_version;
  std::string started_at, finished_at;  // wall-clock; kept out of report.json
  std::string config_echo;              // canonical JSON of the parsed config
  std::string report_json;              // deterministic payload
  std::vector<std::pair<std::string, std::string>> file_digests;  // path, fnv64
};

// Dispatches one command, writes <out_dir>/report.json (deterministic payload),
// <out_dir>/run.json (full record with timestamps and digests) and any CSV
// profiles. Commands: operator, energy, solve, pohozaev, ibp-check,
// limit-study, selftest.
RunRecord run(const std::string& command, const RunConfig& cfg,
              const std::string& out_dir);

// Exit-code mapping for the CLI: 0 success, 2 domain/constraint/config errors,
// 3 solver divergence / quadrature failures, 4 I/O, 1 anything else.
int run_cli(const std::string& command, const std::string& config_path,
            const std::string& out_dir, std::ostream& diag);

// The built-in closed-form example suite; returns the number of failures.
int selftest(std::ostream& os);

}  // namespace fracp

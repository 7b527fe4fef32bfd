// fracp command-line interface: evaluate the fractional p-Laplacian, compute
// energies, solve the constrained minimization problem, and verify the
// Pohozaev / integration-by-parts identities.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracp/run.hpp"
#include "fracp/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fracp: fractional p-Laplacian ground states and identity checks"};
  app.set_version_flag("--version", std::string(fracp::kVersion));
  app.require_subcommand(1);

  const char* commands[] = {"operator",  "energy",      "solve",   "pohozaev",
                            "ibp-check", "limit-study", "selftest"};
  const char* blurbs[] = {
      "pointwise operator value and tail bound at a radius",
      "Gagliardo and potential energies of a profile",
      "constrained minimization and the scaled minimizer",
      "Pohozaev residual (N-sp) a(u) - N b(u) of a profile",
      "integration-by-parts formula residual for the cutoff field",
      "cutoff limit study over a lambda schedule",
      "built-in closed-form example suite"};

  std::string config_path, out_dir = "fracp_out";
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], blurbs[i]);
    sub->add_option("--config", config_path, "JSON configuration file")
        ->required(std::string(commands[i]) != "selftest");
    sub->add_option("--out", out_dir, "output directory (default fracp_out)");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  return fracp::run_cli(command, config_path, out_dir, std::cout);
}

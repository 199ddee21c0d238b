#include <iostream>

#include <CLI11.hpp>

#include "infogen/cli_report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Exact information-theoretic generalization bounds on finite spaces"};
  app.require_subcommand(1, 1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format;

  for (const char* name : {"report", "verify", "sweep"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "64-bit seed for randomized suites");
    sub->add_option("--out", out, "output path (default: stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : infogen::kExitUsage;
  }

  infogen::CliOverrides ov;
  ov.seed = seed;
  if (!out.empty()) ov.out = out;
  if (!format.empty()) ov.format = format == "json" ? infogen::Format::json : infogen::Format::csv;
  const std::string command = app.get_subcommands().front()->get_name();
  return infogen::run_command(command, config, ov, std::cout, std::cerr);
}

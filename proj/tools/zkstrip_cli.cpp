#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "zkstrip/app.hpp"
#include "zkstrip/config.hpp"
#include "zkstrip/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral solver and decay harness for the generalised ZK equation on a strip"};
  app.require_subcommand(1);

  zk::CommandOptions opts;
  std::string output_dir, format;
  std::uint64_t seed = 0;
  app.add_option("--output-dir", output_dir, "Directory for CSV, reports and snapshots");
  app.add_option("--snapshot-format", format, "Write field snapshots in this format")
      ->check(CLI::IsMember({"binary", "csv"}));
  app.add_option("--seed", seed, "Seed for randomised initial data");
  app.add_flag("--quiet", opts.quiet, "Suppress progress output");

  std::string config;
  auto* run = app.add_subcommand("run", "Integrate the configured problem");
  auto* scenario = app.add_subcommand("scenario", "Run a decay scenario and check its bound");
  auto* sweep = app.add_subcommand("sweep", "Rate scaling study over alpha and strip width");
  auto* check = app.add_subcommand("check", "Invariant self-test suite");
  for (auto* sub : {run, scenario, sweep}) sub->add_option("config", config, "Config file")->required();
  for (auto* sub : {run, scenario, sweep, check}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : zk::kExitValidation;
  }

  if (app.count("--output-dir")) opts.output_dir = output_dir;
  if (app.count("--snapshot-format"))
    opts.snapshot_format = format == "csv" ? zk::SnapshotFormat::csv : zk::SnapshotFormat::binary;
  if (app.count("--seed")) opts.seed = seed;

  std::ostringstream sink;
  std::ostream& log = opts.quiet ? static_cast<std::ostream&>(sink) : std::cout;

  if (*check) return zk::check_command(std::cout, opts.quiet);

  try {
    zk::RunSpec spec = zk::load_config(config);
    zk::apply_options(spec, opts);
    if (*run) return zk::run_command(spec, log);
    if (*scenario) return zk::scenario_command(spec, log);
    return zk::sweep_command(spec, log);
  } catch (const zk::ConfigError& e) {
    for (const std::string& m : e.errors()) std::cerr << "config: " << m << '\n';
    return zk::kExitValidation;
  } catch (const zk::ValidationError& e) {
    std::cerr << "invalid: " << e.what() << '\n';
    return zk::kExitValidation;
  } catch (const zk::BlowupError& e) {
    std::cerr << "blow-up at t=" << e.time() << ": " << e.what() << '\n';
    return zk::kExitBlowup;
  } catch (const zk::UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return zk::kExitValidation;
  }
}

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "fragtree/commands.hpp"
#include "fragtree/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fragmenters, bifurcators and bead-splitting trees"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed, replicates;
  std::optional<std::string> out;
  std::optional<int> workers;
  bool print_config = false;
  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "master seed");
  app.add_option("--replicates", replicates, "number of replicates / chains");
  app.add_option("--out", out, "output directory");
  app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1, 1024));
  app.add_flag("--print-config", print_config, "print the effective config and exit");

  app.add_subcommand("moments", "Monte Carlo moments of fragmenters and bifurcators");
  app.add_subcommand("grow", "grow bead-splitting chains, write convergence diagnostics");
  app.add_subcommand("brownian-suite", "Brownian CRT checks: lengths, shapes, segments");
  app.add_subcommand("bifurcate", "dump simulated bifurcators as JSON lines");
  app.add_subcommand("check-density", "exponents and sampler diagnostics of a density");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : fragtree::kConfigError;
  }

  fragtree::ExperimentConfig config;
  try {
    if (!config_path.empty()) config = fragtree::load_config(config_path);
    if (seed) config.seed = *seed;
    if (replicates) config.replicates = *replicates;
    if (out) config.out = *out;
    if (workers) config.workers = *workers;
    fragtree::validate_config(config, "command line");
  } catch (const fragtree::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return fragtree::kConfigError;
  }
  if (print_config) {
    std::cout << fragtree::serialize_config(config);
    return 0;
  }
  return fragtree::run_command(app.get_subcommands().front()->get_name(), config, std::cout);
}

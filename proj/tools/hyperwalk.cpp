// Experiment runner: hyperwalk <subcommand> --config FILE [--seed N] [--jobs N] [--out DIR] [--plots]

#include <CLI11.hpp>

#include <iostream>

#include "hyperwalk/config.hpp"
#include "hyperwalk/errors.hpp"
#include "hyperwalk/parallel.hpp"
#include "hyperwalk/runner.hpp"

int main(int argc, char** argv) {
  using namespace hyperwalk;

  CLI::App app{"Random walks on free groups acting on trees and on the hyperbolic plane"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  unsigned jobs = default_jobs();
  bool plots = false;

  for (const auto& name : subcommands()) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " suite");
    sub->add_option("--config", config_path, "experiment config")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--plots", plots, "write SVG convergence plots");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string subcommand = app.get_subcommands().front()->get_name();

  try {
    ExperimentConfig config = load_config(config_path);
    if (app.get_subcommands().front()->count("--seed")) config.seed = seed;
    const ExperimentReport report = run(subcommand, config, jobs);
    for (const auto& path : emit(report, out_dir, plots)) std::cout << "wrote " << path.string() << '\n';
    for (const auto& [name, e] : report.estimates) {
      std::cout << (e.pass ? "PASS " : "FAIL ") << name << " = " << e.value << " (gate " << e.relation << ' '
                << e.gate << ", margin " << e.margin << ")\n";
    }
    return report.all_pass() ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

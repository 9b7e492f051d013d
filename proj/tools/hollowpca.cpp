// hollowpca: run, validate and list the Monte Carlo experiments.
//
// Exit codes: 0 success, 2 invalid config or usage, 3 some replicates failed,
// 4 internal error.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>

#include "CLI11.hpp"

#include "hollowpca/experiments/harness.hpp"

namespace ex = hollowpca::experiments;

namespace {

constexpr int kOk = 0, kConfigInvalid = 2, kPartial = 3, kInternal = 4;

void list_experiments() {
  for (const auto& spec : ex::catalog()) {
    std::cout << ex::to_string(spec.kind) << "\n  " << spec.description << "\n";
    for (const auto& p : spec.params) std::printf("    %-18s %-10g %s\n", p.name.c_str(), p.fallback, p.help.c_str());
    for (const auto& o : spec.options) {
      std::string allowed;
      for (const auto& a : o.allowed) allowed += (allowed.empty() ? "" : "|") + a;
      std::printf("    %-18s %-10s %s\n", o.name.c_str(), allowed.c_str(), o.help.c_str());
    }
  }
}

int run(const std::string& path, int workers, const std::optional<std::string>& out,
        const std::optional<std::uint64_t>& seed) {
  ex::ExperimentConfig cfg = ex::load_config(path);
  if (seed) cfg.seed = *seed;
  if (out) cfg.output = *out;
  const ex::ExperimentResult result = ex::run_experiment(cfg, {workers});
  for (const auto& file : ex::write_outputs(result, cfg.output)) std::cout << "wrote " << file << "\n";
  const auto failed = result.failures();
  if (failed > 0) {
    std::cerr << failed << " of " << result.records.size() << " replicates failed; see the status column\n";
    return kPartial;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hollowed-Gram spectral methods: Monte Carlo experiments"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "run an experiment config and write CSV/JSON results");
  std::string run_path;
  int workers = 0;
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  run_cmd->add_option("config", run_path, "experiment config (JSON)")->required();
  run_cmd->add_option("--workers", workers, "worker threads (default: hardware parallelism)")
      ->check(CLI::NonNegativeNumber);
  run_cmd->add_option("--out", out_dir, "output directory (overrides the config)");
  run_cmd->add_option("--seed", seed, "master seed (overrides the config)");

  app.add_subcommand("list-experiments", "list experiments with their parameters");

  auto* validate_cmd = app.add_subcommand("validate", "check a config without sampling");
  std::string validate_path;
  validate_cmd->add_option("config", validate_path, "experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigInvalid;
  }

  try {
    if (app.got_subcommand("list-experiments")) {
      list_experiments();
      return kOk;
    }
    if (app.got_subcommand("validate")) {
      const auto cfg = ex::load_config(validate_path);
      ex::validate(cfg);
      std::cout << "ok: " << ex::to_string(cfg.experiment) << ", " << ex::expand_grid(cfg).size()
                << " grid points x " << cfg.replicates << " replicates\n";
      return kOk;
    }
    return run(run_path, workers, out_dir, seed);
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

// Command line entry point: generate benchmark data, train the
// representation, evaluate detectors, run ablations, sweep target-data
// counts, and check the error bounds on a trained model.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "irad/commands.hpp"
#include "irad/errors.hpp"

namespace {

struct FlagValues {
  std::string config;
  std::string out;
  std::string adv_mode;
  std::string variant;
  std::uint64_t seed = 0;
  int epochs = 0;
  std::size_t nt = 0;
  double alpha = 0.0;
  double beta = 0.0;
  int trees = 0;
  std::size_t psi = 0;
};

// Defaults -> config file -> flags, last writer wins.
irad::RunConfig resolve_config(const FlagValues& flags, const CLI::App& cmd) {
  irad::RunConfig cfg;
  if (!flags.config.empty()) cfg = irad::parse_config_file(flags.config);
  const auto apply = [&](const char* flag, const char* key, const std::string& value) {
    if (cmd.count(flag) > 0) irad::apply_config_line(cfg, key, value, flag);
  };
  apply("--seed", "seed", std::to_string(flags.seed));
  apply("--out", "out_dir", flags.out);
  apply("--epochs", "epochs", std::to_string(flags.epochs));
  apply("--nt", "n_t", std::to_string(flags.nt));
  apply("--alpha", "alpha", std::to_string(flags.alpha));
  apply("--beta", "beta", std::to_string(flags.beta));
  apply("--adv-mode", "adv_mode", flags.adv_mode);
  apply("--variant", "variant", flags.variant);
  apply("--trees", "trees", std::to_string(flags.trees));
  apply("--psi", "psi", std::to_string(flags.psi));
  return cfg;
}

void add_common_flags(CLI::App* cmd, FlagValues& flags) {
  cmd->add_option("--config", flags.config, "Path to a key=value config file");
  cmd->add_option("--seed", flags.seed, "Run seed")->default_val(0);
  cmd->add_option("--out", flags.out, "Output directory")->default_val("out");
  cmd->add_option("--epochs", flags.epochs, "Training epochs")->default_val(60);
  cmd->add_option("--nt", flags.nt, "Target-domain training rows")->default_val(50);
  cmd->add_option("--alpha", flags.alpha, "Cycle loss weight")->default_val(1.0);
  cmd->add_option("--beta", flags.beta, "Similarity/dissimilarity loss weight")
      ->default_val(0.5);
  cmd->add_option("--adv-mode", flags.adv_mode,
                  "Adversarial objective: vanilla or least_squares")
      ->default_val("vanilla");
  cmd->add_option("--variant", flags.variant,
                  "Ablation variant: all, full, no_lsim, no_cycle or no_xrnd")
      ->default_val("all");
  cmd->add_option("--trees", flags.trees, "Isolation forest size")->default_val(100);
  cmd->add_option("--psi", flags.psi, "Isolation forest subsample size")
      ->default_val(256);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain-adapted anomaly detection on invariant representations"};
  app.require_subcommand(1);

  FlagValues flags;
  CLI::App* gen = app.add_subcommand("gen", "Generate benchmark CSVs");
  CLI::App* train = app.add_subcommand("train", "Train and write checkpoint + log");
  CLI::App* eval = app.add_subcommand("eval", "Score detectors on the test set");
  CLI::App* ablate = app.add_subcommand("ablate", "Run objective-term ablations");
  CLI::App* sweep = app.add_subcommand("sweep", "Sweep target training-set sizes");
  CLI::App* theory = app.add_subcommand("theory", "Check error bounds on a checkpoint");
  for (CLI::App* cmd : {gen, train, eval, ablate, sweep, theory}) {
    add_common_flags(cmd, flags);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* active = app.get_subcommands().front();
    const irad::RunConfig cfg = resolve_config(flags, *active);
    const std::string name = active->get_name();
    if (name == "gen") irad::cmd_gen(cfg);
    else if (name == "train") irad::cmd_train(cfg);
    else if (name == "eval") irad::cmd_eval(cfg);
    else if (name == "ablate") irad::cmd_ablate(cfg);
    else if (name == "sweep") irad::cmd_sweep(cfg);
    else if (name == "theory") irad::cmd_theory(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

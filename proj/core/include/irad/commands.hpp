#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "irad/pipeline.hpp"

namespace irad {

// Full run configuration: benchmark, model, training, forest and harness
// settings. Every field has a default; a key=value config file may override
// any of them, and CLI flags override the file.
struct RunConfig {
  ExperimentConfig exp;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  std::string variant = "all";  // ablation selection: all or one variant name
  std::vector<std::size_t> nt_grid = {10, 20, 50, 100};
  int n_seeds = 5;
};

// Parses the key=value grammar: one `key = value` pair per line, `#` starts
// a comment, blank lines ignored. Unknown keys are rejected.
RunConfig parse_config_file(const std::string& path);
void apply_config_line(RunConfig& cfg, const std::string& key, const std::string& value,
                       const std::string& context);

// Derived seeds for the pipeline stages of one run.
std::uint64_t model_seed(std::uint64_t run_seed);
std::uint64_t train_seed(std::uint64_t run_seed);
std::uint64_t forest_seed(std::uint64_t run_seed);

// Subcommand bodies. All outputs land under cfg.out_dir; failures throw.
void cmd_gen(const RunConfig& cfg);
void cmd_train(const RunConfig& cfg);
void cmd_eval(const RunConfig& cfg);
void cmd_ablate(const RunConfig& cfg);
void cmd_sweep(const RunConfig& cfg);
void cmd_theory(const RunConfig& cfg);

}  // namespace irad

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "irad/data.hpp"
#include "irad/iforest.hpp"
#include "irad/model.hpp"
#include "irad/trainer.hpp"

namespace irad {

// irad scores isolation paths of shared encodings; the raw kinds bypass the
// encoder and isolate raw features (target-only or source+target training).
enum class DetectorKind { irad, if_raw_t, if_raw_st };

const char* detector_kind_name(DetectorKind k);

struct ForestParams {
  int n_trees = 100;
  std::size_t psi = 256;  // clamped to the training row count
};

struct Detector {
  IradModel model;  // used only by the irad kind
  IsolationForest forest;
  DetectorKind kind = DetectorKind::irad;
};

// Fits the forest on row-stacked shared encodings of source and target
// training data.
Detector build_irad_detector(const IradModel& m, const LabeledSet& source_train,
                             const LabeledSet& target_train, const ForestParams& params,
                             Rng& rng);

// Raw-feature baseline: target-only or source+target.
Detector build_raw_detector(DetectorKind kind, const LabeledSet& source_train,
                            const LabeledSet& target_train, const ForestParams& params,
                            Rng& rng);

// Row-wise anomaly scores; the irad kind depends on x only through the
// shared encoding.
std::vector<double> anomaly_score(const Detector& d, const Matrix& x);

struct ExperimentConfig {
  BenchSpec bench;
  ModelConfig model;
  TrainConfig train;
  ForestParams forest;
};

struct ExperimentResult {
  double auroc_irad = 0.0;
  double auroc_if_t = 0.0;
  double auroc_if_st = 0.0;
  IradModel model;
  TrainLog log;
  Detector detector;
};

// End-to-end run on a fresh benchmark draw: train the representation, fit
// forests, score the target test set. Deterministic in (config, seed).
ExperimentResult run_experiment(const ExperimentConfig& cfg, std::uint64_t seed);

// Mean absolute pairwise cosine between shared encodings of the two domains.
double cross_domain_cosine(const IradModel& m, const Matrix& x_src, const Matrix& x_tgt);

enum class Variant { full, no_lsim, no_cycle, no_xrnd };

const char* variant_name(Variant v);
Variant variant_from_name(const std::string& name);

// Applies a variant's single-term toggle to a training config.
TrainConfig apply_variant(TrainConfig cfg, Variant v);

struct AblationReport {
  Variant variant = Variant::full;
  double auroc = 0.0;
  double mean_cross_cosine = 0.0;
};

// Trains one variant on one benchmark draw. When out_dir is non-empty, a
// pca_2d_<variant>.csv with projected encodings (pc1, pc2, domain, label) is
// written there.
AblationReport run_ablation(Variant variant, const ExperimentConfig& cfg,
                            std::uint64_t seed, const std::string& out_dir = "");

struct NtSweepRow {
  std::size_t n_t = 0;
  double mean_auroc = 0.0;
  double sd_auroc = 0.0;
};

// Target-scarcity sweep: one full experiment per (n_t value, seed).
// Values must be ascending.
std::vector<NtSweepRow> nt_sweep(std::span<const std::size_t> values,
                                 const ExperimentConfig& cfg,
                                 std::span<const std::uint64_t> seeds);

void write_nt_sweep_csv(const std::string& path, std::span<const NtSweepRow> rows);

}  // namespace irad

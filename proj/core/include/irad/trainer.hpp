#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "irad/data.hpp"
#include "irad/losses.hpp"
#include "irad/matrix.hpp"
#include "irad/model.hpp"
#include "irad/rng.hpp"

namespace irad {

enum class EarlyStop { none, holdout_proxy };

const char* early_stop_name(EarlyStop e);
EarlyStop early_stop_from_name(const std::string& name);

// How target rows borrow private codes from the source batch: by position
// (random, since batches are shuffled) or by nearest shared-code cosine.
// Matching couples the generated x'_tgt to a source row that is actually
// predictable from the shared code, which forces shared content through the
// shared encoder instead of letting the private code carry everything.
enum class Pairing { random, matched };

const char* pairing_name(Pairing p);
Pairing pairing_from_name(const std::string& name);

struct TrainConfig {
  double alpha = 1.0;
  double beta = 0.5;
  int epochs = 60;
  std::size_t batch_size = 64;
  std::size_t n_t = 50;
  double learn_rate = 2e-4;
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  int d_steps_per_g_step = 1;
  std::uint64_t seed = 0;
  AdvMode adv_mode = AdvMode::vanilla;
  EarlyStop early_stop = EarlyStop::holdout_proxy;
  Pairing pairing = Pairing::matched;
  // Ablation toggles: drop the cycle terms from the total, drop the
  // similarity term from the total, or remove the noise-generation stream
  // from both adversarial losses. Dropped terms are still logged.
  bool use_cycle = true;
  bool use_lsim = true;
  bool use_xrnd = true;
  int checkpoint_every = 0;  // epochs between periodic checkpoints; 0 = off
};

struct EpochRecord {
  LossBundle losses;        // mean over the epoch's steps
  double proxy_val = 0.0;   // holdout reconstruction; NaN when disabled
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  int selected_epoch = -1;  // 0-based; argmin proxy, or last epoch without early stop
};

// Adam over an externally owned parameter list. Moment state is aligned
// with the parameter order used at construction.
class AdamOptimizer {
 public:
  AdamOptimizer(std::vector<Matrix*> params, double lr, double beta1, double beta2,
                double eps);
  void step(const std::vector<Matrix>& grads);
  std::int64_t steps_taken() const { return t_; }

 private:
  std::vector<Matrix*> params_;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  double lr_, beta1_, beta2_, eps_;
  std::int64_t t_ = 0;
};

// Alternating adversarial optimization of the four networks. The trainer
// owns the only mutable reference to the model; tapes are confined to one
// substep. During a discriminator step the encoder/generator parameters are
// bound as constants and stay bit-unchanged, and conversely.
class Trainer {
 public:
  Trainer(IradModel& model, const TrainConfig& cfg);

  // One discriminator update on v_d; z is the noise batch for x_rnd.
  double discriminator_step(const Matrix& x_src, const Matrix& x_tgt, const Matrix& z);
  // One joint update of shared encoder, private encoder and generator on the
  // total objective.
  double generator_step(const Matrix& x_src, const Matrix& x_tgt, const Matrix& z);
  // d_steps_per_g_step discriminator updates followed by one generator
  // update, then a plain re-evaluation of every loss term. Consumes one
  // noise batch per substep from rng, in order.
  LossBundle train_step(const Matrix& x_src, const Matrix& x_tgt, Rng& rng);

  const TrainConfig& config() const { return cfg_; }

 private:
  IradModel& model_;
  TrainConfig cfg_;
  AdamOptimizer d_opt_;
  AdamOptimizer g_opt_;
};

// Source rows lending their private codes to the target batch: the batch
// itself under random pairing, or per-row best shared-code cosine matches
// under matched pairing.
Matrix pair_source_rows(const IradModel& m, const Matrix& x_src, const Matrix& x_tgt,
                        Pairing pairing);

// Plain (non-recorded) evaluation of all loss terms for the given batches
// and noise, honoring the config's ablation toggles for the total.
LossBundle evaluate_losses(const IradModel& m, const Matrix& x_src, const Matrix& x_tgt,
                           const TrainConfig& cfg, const Matrix& z);

// Mean reconstruction distance of held-out target rows generated from their
// shared codes and the private codes of source partners.
double holdout_reconstruction(const IradModel& m, const Matrix& holdout_x,
                              const Matrix& source_x,
                              Pairing pairing = Pairing::matched);

// Earliest index of the minimum; -1 for empty input.
int select_epoch(const std::vector<double>& proxy_values);

struct FitOptions {
  std::string out_dir;  // when non-empty, emits train_log.csv and checkpoints
  std::function<void(int epoch, const IradModel& m, const EpochRecord& rec)> on_epoch;
};

struct FitResult {
  IradModel model;
  TrainLog log;
};

// Runs cfg.epochs passes over the source set with target batches resampled
// with replacement. Training data must be all-normal (label 0). With
// holdout_proxy early stopping, 20% of the target rows (min 2) are held out
// and the checkpoint minimizing their reconstruction proxy is returned.
FitResult fit(const IradModel& init, const LabeledSet& source,
              const LabeledSet& target_train, const TrainConfig& cfg,
              const FitOptions& opts = {});

void write_train_log_csv(const std::string& path, const TrainLog& log);

}  // namespace irad

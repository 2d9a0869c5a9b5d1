#include "irad/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>

#include "irad/checkpoint.hpp"
#include "irad/errors.hpp"
#include "irad/format.hpp"

namespace irad {

const char* early_stop_name(EarlyStop e) {
  return e == EarlyStop::none ? "none" : "holdout_proxy";
}

EarlyStop early_stop_from_name(const std::string& name) {
  if (name == "none") return EarlyStop::none;
  if (name == "holdout_proxy") return EarlyStop::holdout_proxy;
  throw ParseError("unknown early_stop mode '" + name + "'");
}

AdamOptimizer::AdamOptimizer(std::vector<Matrix*> params, double lr, double beta1,
                             double beta2, double eps)
    : params_(std::move(params)), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (const Matrix* p : params_) {
    m_.emplace_back(p->rows(), p->cols());
    v_.emplace_back(p->rows(), p->cols());
  }
}

void AdamOptimizer::step(const std::vector<Matrix>& grads) {
  if (grads.size() != params_.size()) {
    throw ContractError("AdamOptimizer: got " + std::to_string(grads.size()) +
                        " gradients for " + std::to_string(params_.size()) + " params");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t p = 0; p < params_.size(); ++p) {
    Matrix& theta = *params_[p];
    const Matrix& g = grads[p];
    if (!theta.same_shape(g)) {
      throw ShapeError("AdamOptimizer: gradient " + shape_string(g) +
                       " vs param " + shape_string(theta));
    }
    for (std::size_t i = 0; i < theta.size(); ++i) {
      const double gi = g.data()[i];
      double& mi = m_[p].data()[i];
      double& vi = v_[p].data()[i];
      mi = beta1_ * mi + (1.0 - beta1_) * gi;
      vi = beta2_ * vi + (1.0 - beta2_) * gi * gi;
      const double m_hat = mi / bc1;
      const double v_hat = vi / bc2;
      theta.data()[i] -= lr_ * m_hat / (std::sqrt(v_hat) + eps_);
    }
  }
}

namespace {

std::vector<Matrix*> generator_side_parameters(IradModel& m) {
  std::vector<Matrix*> params = mlp_parameters(m.e_sh);
  for (Matrix* p : mlp_parameters(m.e_pv)) params.push_back(p);
  for (Matrix* p : mlp_parameters(m.g_src)) params.push_back(p);
  return params;
}

// Forward graph of one substep. The player being updated binds its
// parameters with gradient tracking; the opponent binds constants.
struct StepGraph {
  Tape tape;
  MlpBinding e_sh, e_pv, g_src, d_src;
  Tape::NodeId x_src_node = 0, z_sh_src = 0, z_pv_src = 0, z_sh_tgt = 0;
  Tape::NodeId x_src_hat = 0, x_tgt_hat = 0, x_rnd = 0;
  Tape::NodeId d_real = 0;
  std::vector<Tape::NodeId> d_fakes;
};

StepGraph build_step_graph(const IradModel& m, const Matrix& x_src, const Matrix& x_tgt,
                           const Matrix& z, bool track_discriminator, bool use_xrnd) {
  if (x_src.rows() != x_tgt.rows()) {
    throw ShapeError("train_step: source batch " + shape_string(x_src) +
                     " vs target batch " + shape_string(x_tgt) +
                     " (same-index private-code pairing needs equal batches)");
  }
  StepGraph g;
  Tape& tape = g.tape;
  g.e_sh = bind_mlp(tape, m.e_sh, !track_discriminator);
  g.e_pv = bind_mlp(tape, m.e_pv, !track_discriminator);
  g.g_src = bind_mlp(tape, m.g_src, !track_discriminator);
  g.d_src = bind_mlp(tape, m.d_src, track_discriminator);

  g.x_src_node = tape.constant(x_src);
  const Tape::NodeId x_tgt_node = tape.constant(x_tgt);
  const Tape::NodeId z_node = tape.constant(z);

  g.z_sh_src = mlp_forward(tape, m.e_sh, g.e_sh, g.x_src_node);
  g.z_pv_src = mlp_forward(tape, m.e_pv, g.e_pv, g.x_src_node);
  g.z_sh_tgt = mlp_forward(tape, m.e_sh, g.e_sh, x_tgt_node);

  g.x_src_hat =
      mlp_forward(tape, m.g_src, g.g_src, combine_codes(m, tape, g.z_sh_src, g.z_pv_src));
  g.x_tgt_hat =
      mlp_forward(tape, m.g_src, g.g_src, combine_codes(m, tape, g.z_sh_tgt, g.z_pv_src));

  g.d_real = mlp_forward(tape, m.d_src, g.d_src, g.x_src_node);
  g.d_fakes.push_back(mlp_forward(tape, m.d_src, g.d_src, g.x_src_hat));
  g.d_fakes.push_back(mlp_forward(tape, m.d_src, g.d_src, g.x_tgt_hat));
  if (use_xrnd) {
    g.x_rnd =
        mlp_forward(tape, m.g_src, g.g_src, combine_codes(m, tape, g.z_sh_src, z_node));
    g.d_fakes.push_back(mlp_forward(tape, m.d_src, g.d_src, g.x_rnd));
  }
  return g;
}

void require_finite(double v, const char* term) {
  if (!std::isfinite(v)) {
    throw TrainError(std::string("non-finite loss term ") + term);
  }
}

}  // namespace

Trainer::Trainer(IradModel& model, const TrainConfig& cfg)
    : model_(model),
      cfg_(cfg),
      d_opt_(mlp_parameters(model.d_src), cfg.learn_rate, cfg.adam_beta1,
             cfg.adam_beta2, cfg.adam_eps),
      g_opt_(generator_side_parameters(model), cfg.learn_rate, cfg.adam_beta1,
             cfg.adam_beta2, cfg.adam_eps) {
  if (cfg.adv_mode != model.adv_mode) {
    throw ContractError("Trainer: config adv_mode does not match model adv_mode");
  }
}

double Trainer::discriminator_step(const Matrix& x_src, const Matrix& x_tgt,
                                   const Matrix& z) {
  StepGraph g = build_step_graph(model_, x_src, x_tgt, z, true, cfg_.use_xrnd);
  const Tape::NodeId v_d =
      adv_discriminator_loss(g.tape, g.d_real, g.d_fakes, cfg_.adv_mode);
  const double value = g.tape.value(v_d)(0, 0);
  require_finite(value, "v_d");
  g.tape.backward(v_d);
  d_opt_.step(mlp_gradients(g.tape, g.d_src));
  return value;
}

double Trainer::generator_step(const Matrix& x_src, const Matrix& x_tgt,
                               const Matrix& z) {
  StepGraph g = build_step_graph(model_, x_src, x_tgt, z, false, cfg_.use_xrnd);
  Tape& tape = g.tape;
  const Tape::NodeId v_g = adv_generator_loss(tape, g.d_fakes, cfg_.adv_mode);
  const Tape::NodeId l1 = cycle_loss_node(tape, g.x_src_node, g.x_src_hat);
  const Tape::NodeId l2 = cycle_loss_node(tape, g.x_src_node, g.x_tgt_hat);
  const Tape::NodeId l_dis = dissimilarity_loss_node(tape, g.z_sh_src, g.z_pv_src);
  const Tape::NodeId l_sim = similarity_loss_node(tape, g.z_sh_src, g.z_sh_tgt);

  require_finite(tape.value(v_g)(0, 0), "v_g");
  require_finite(tape.value(l1)(0, 0), "l1");
  require_finite(tape.value(l2)(0, 0), "l2");
  require_finite(tape.value(l_dis)(0, 0), "l_dis");
  require_finite(tape.value(l_sim)(0, 0), "l_sim");

  Tape::NodeId total = v_g;
  if (cfg_.use_cycle) {
    total = tape.add(total, tape.affine(tape.add(l1, l2), cfg_.alpha, 0.0));
  }
  Tape::NodeId sim_part = l_dis;
  if (cfg_.use_lsim) sim_part = tape.add(l_dis, l_sim);
  total = tape.add(total, tape.affine(sim_part, cfg_.beta, 0.0));

  const double value = tape.value(total)(0, 0);
  require_finite(value, "total");
  tape.backward(total);

  std::vector<Matrix> grads = mlp_gradients(tape, g.e_sh);
  for (Matrix& m : mlp_gradients(tape, g.e_pv)) grads.push_back(std::move(m));
  for (Matrix& m : mlp_gradients(tape, g.g_src)) grads.push_back(std::move(m));
  g_opt_.step(grads);
  return value;
}

LossBundle Trainer::train_step(const Matrix& x_src, const Matrix& x_tgt, Rng& rng) {
  const std::size_t batch = x_src.rows();
  if (batch == 0) throw ContractError("train_step: empty batch");
  for (int k = 0; k < cfg_.d_steps_per_g_step; ++k) {
    discriminator_step(x_src, x_tgt, rng.normal_matrix(batch, model_.d_p));
  }
  const Matrix z = rng.normal_matrix(batch, model_.d_p);
  generator_step(x_src, x_tgt, z);

  LossBundle bundle = evaluate_losses(model_, x_src, x_tgt, cfg_, z);
  require_finite(bundle.v_d, "v_d");
  require_finite(bundle.total, "total");
  return bundle;
}

LossBundle evaluate_losses(const IradModel& m, const Matrix& x_src, const Matrix& x_tgt,
                           const TrainConfig& cfg, const Matrix& z) {
  const Matrix z_sh_src = encode_shared(m, x_src);
  const Matrix z_pv_src = encode_private(m, x_src);
  const Matrix z_sh_tgt = encode_shared(m, x_tgt);
  const Matrix x_src_hat = generate(m, z_sh_src, z_pv_src);
  const Matrix x_tgt_hat = generate(m, z_sh_tgt, z_pv_src);

  const Matrix d_real = discriminate(m, x_src);
  const Matrix d_fake_src = discriminate(m, x_src_hat);
  const Matrix d_fake_tgt = discriminate(m, x_tgt_hat);

  LossBundle bundle;
  bundle.alpha = cfg.alpha;
  bundle.beta = cfg.beta;

  Tape tape;
  std::vector<Tape::NodeId> fakes = {tape.constant(d_fake_src),
                                     tape.constant(d_fake_tgt)};
  if (cfg.use_xrnd) {
    const Matrix x_rnd = generate(m, z_sh_src, z);
    fakes.push_back(tape.constant(discriminate(m, x_rnd)));
  }
  const Tape::NodeId real_node = tape.constant(d_real);
  bundle.v_d =
      tape.value(adv_discriminator_loss(tape, real_node, fakes, cfg.adv_mode))(0, 0);
  bundle.v_g = tape.value(adv_generator_loss(tape, fakes, cfg.adv_mode))(0, 0);

  const CycleLosses cycle = cycle_losses(x_src, x_src_hat, x_tgt_hat);
  bundle.l1 = cycle.l1;
  bundle.l2 = cycle.l2;
  bundle.l_dis = dissimilarity_loss(z_sh_src, z_pv_src);
  bundle.l_sim = similarity_loss(z_sh_src, z_sh_tgt);

  bundle.total = bundle.v_g;
  if (cfg.use_cycle) bundle.total += cfg.alpha * (bundle.l1 + bundle.l2);
  bundle.total += cfg.beta * (bundle.l_dis + (cfg.use_lsim ? bundle.l_sim : 0.0));
  return bundle;
}

double holdout_reconstruction(const IradModel& m, const Matrix& holdout_x,
                              const Matrix& source_x) {
  if (holdout_x.rows() == 0) return std::numeric_limits<double>::quiet_NaN();
  Matrix partners(holdout_x.rows(), source_x.cols());
  for (std::size_t i = 0; i < holdout_x.rows(); ++i) {
    const auto src_row = source_x.row(i % source_x.rows());
    std::copy(src_row.begin(), src_row.end(), partners.row(i).begin());
  }
  const Matrix recon = generate(m, encode_shared(m, holdout_x), encode_private(m, partners));
  const Matrix diff = sub(partners, recon);
  double sum = 0.0;
  for (std::size_t i = 0; i < diff.rows(); ++i) {
    double n2 = 0.0;
    for (std::size_t j = 0; j < diff.cols(); ++j) n2 += diff(i, j) * diff(i, j);
    sum += std::sqrt(n2);
  }
  return sum / static_cast<double>(diff.rows());
}

int select_epoch(const std::vector<double>& proxy_values) {
  if (proxy_values.empty()) return -1;
  int best = 0;
  for (int i = 1; i < static_cast<int>(proxy_values.size()); ++i) {
    if (proxy_values[i] < proxy_values[best]) best = i;
  }
  return best;
}

namespace {

void check_all_normal(const LabeledSet& set, const char* which) {
  for (std::size_t i = 0; i < set.y.size(); ++i) {
    if (set.y[i] != 0) {
      throw ContractError(std::string("fit: ") + which + " contains label " +
                          std::to_string(set.y[i]) + " at row " + std::to_string(i) +
                          "; training data must be all-normal");
    }
  }
}

}  // namespace

FitResult fit(const IradModel& init, const LabeledSet& source,
              const LabeledSet& target_train, const TrainConfig& cfg,
              const FitOptions& opts) {
  if (cfg.epochs < 1) throw ContractError("fit: epochs must be >= 1");
  if (cfg.batch_size < 2) throw ContractError("fit: batch_size must be >= 2");
  if (target_train.size() != cfg.n_t) {
    throw ContractError("fit: target_train has " + std::to_string(target_train.size()) +
                        " rows but config n_t is " + std::to_string(cfg.n_t));
  }
  check_all_normal(source, "source");
  check_all_normal(target_train, "target_train");
  if (source.x.cols() != init.d_x || target_train.x.cols() != init.d_x) {
    throw ShapeError("fit: data width does not match model d_x");
  }

  Rng rng(cfg.seed);

  // Target holdout for the early-stopping proxy. Needs at least one training
  // row left over; with fewer than 3 target rows the proxy is disabled.
  bool use_proxy = cfg.early_stop == EarlyStop::holdout_proxy && target_train.size() >= 3;
  LabeledSet target_pool = target_train;
  Matrix holdout_x;
  if (use_proxy) {
    const std::size_t n = target_train.size();
    std::size_t h = static_cast<std::size_t>(
        std::lround(0.2 * static_cast<double>(n)));
    h = std::clamp<std::size_t>(h, 2, n - 1);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    const std::vector<std::size_t> hold(order.begin(), order.begin() + h);
    const std::vector<std::size_t> keep(order.begin() + h, order.end());
    holdout_x = take_rows(target_train, hold).x;
    target_pool = take_rows(target_train, keep);
  }

  FitResult result;
  result.model = init;
  Trainer trainer(result.model, cfg);

  IradModel best_model = result.model;
  double best_proxy = std::numeric_limits<double>::infinity();
  int best_epoch = -1;
  std::vector<double> proxies;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::vector<std::size_t> order(source.size());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    LossBundle sum;
    int steps = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size) {
      const std::size_t end = std::min(begin + cfg.batch_size, order.size());
      if (end - begin < 2) break;  // drop a ragged single-row tail
      const std::vector<std::size_t> batch_rows(order.begin() + begin,
                                                order.begin() + end);
      const Matrix x_src = take_rows(source, batch_rows).x;
      std::vector<std::size_t> tgt_rows(end - begin);
      for (std::size_t i = 0; i < tgt_rows.size(); ++i) {
        tgt_rows[i] = rng.uniform_index(target_pool.size());
      }
      const Matrix x_tgt = take_rows(target_pool, tgt_rows).x;

      const LossBundle b = trainer.train_step(x_src, x_tgt, rng);
      sum.v_d += b.v_d;
      sum.v_g += b.v_g;
      sum.l1 += b.l1;
      sum.l2 += b.l2;
      sum.l_dis += b.l_dis;
      sum.l_sim += b.l_sim;
      sum.total += b.total;
      ++steps;
    }
    if (steps == 0) throw ContractError("fit: source set yields no usable batch");

    EpochRecord rec;
    rec.losses.alpha = cfg.alpha;
    rec.losses.beta = cfg.beta;
    const double inv = 1.0 / static_cast<double>(steps);
    rec.losses.v_d = sum.v_d * inv;
    rec.losses.v_g = sum.v_g * inv;
    rec.losses.l1 = sum.l1 * inv;
    rec.losses.l2 = sum.l2 * inv;
    rec.losses.l_dis = sum.l_dis * inv;
    rec.losses.l_sim = sum.l_sim * inv;
    rec.losses.total = sum.total * inv;
    rec.proxy_val = use_proxy
                        ? holdout_reconstruction(result.model, holdout_x, source.x)
                        : std::numeric_limits<double>::quiet_NaN();
    result.log.epochs.push_back(rec);
    proxies.push_back(rec.proxy_val);

    if (use_proxy && rec.proxy_val < best_proxy) {
      best_proxy = rec.proxy_val;
      best_model = result.model;
      best_epoch = epoch;
    }
    if (opts.on_epoch) opts.on_epoch(epoch, result.model, rec);
    if (!opts.out_dir.empty() && cfg.checkpoint_every > 0 &&
        (epoch + 1) % cfg.checkpoint_every == 0) {
      save_checkpoint(opts.out_dir + "/checkpoint_epoch_" + std::to_string(epoch) +
                          ".json",
                      Checkpoint{result.model, cfg.seed, std::nullopt});
    }
  }

  if (use_proxy) {
    result.log.selected_epoch = best_epoch;
    result.model = std::move(best_model);
  } else {
    result.log.selected_epoch = cfg.epochs - 1;
  }
  if (!opts.out_dir.empty()) {
    write_train_log_csv(opts.out_dir + "/train_log.csv", result.log);
  }
  return result;
}

void write_train_log_csv(const std::string& path, const TrainLog& log) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "epoch,v_d,v_g,l1,l2,l_dis,l_sim,total,proxy_val\n";
  for (std::size_t e = 0; e < log.epochs.size(); ++e) {
    const LossBundle& b = log.epochs[e].losses;
    out << e << ',' << format_double(b.v_d) << ',' << format_double(b.v_g) << ','
        << format_double(b.l1) << ',' << format_double(b.l2) << ','
        << format_double(b.l_dis) << ',' << format_double(b.l_sim) << ','
        << format_double(b.total) << ',' << format_double(log.epochs[e].proxy_val)
        << '\n';
  }
}

}  // namespace irad

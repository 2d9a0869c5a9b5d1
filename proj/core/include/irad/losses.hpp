#pragma once

#include <span>
#include <string>

#include "irad/matrix.hpp"
#include "irad/tape.hpp"

namespace irad {

enum class AdvMode { vanilla, least_squares };

const char* adv_mode_name(AdvMode m);
AdvMode adv_mode_from_name(const std::string& name);

// All objective terms of one training step. `total` is the minimizing
// players' objective; with every term enabled,
// total == v_g + alpha*(l1+l2) + beta*(l_dis+l_sim).
struct LossBundle {
  double v_d = 0.0;
  double v_g = 0.0;
  double l1 = 0.0;
  double l2 = 0.0;
  double l_dis = 0.0;
  double l_sim = 0.0;
  double total = 0.0;
  double alpha = 1.0;
  double beta = 0.5;
};

// ---- Recorded (differentiable) builders ------------------------------------

// Discriminator objective over one real stream and 1..3 fake streams. Raw
// scores in, the sigmoid of vanilla mode is fused into the loss. Fake
// streams are averaged so the fake mass balances the real term.
Tape::NodeId adv_discriminator_loss(Tape& tape, Tape::NodeId d_real,
                                    std::span<const Tape::NodeId> d_fakes, AdvMode mode);

// Non-saturating generator objective over the fake streams.
Tape::NodeId adv_generator_loss(Tape& tape, std::span<const Tape::NodeId> d_fakes,
                                AdvMode mode);

// Mean over the batch of per-row Euclidean distance between x and x_hat.
Tape::NodeId cycle_loss_node(Tape& tape, Tape::NodeId x, Tape::NodeId x_hat);

// Frobenius norm of the pairwise-cosine matrix between shared and private
// codes, divided by the batch size. In [0, 1].
Tape::NodeId dissimilarity_loss_node(Tape& tape, Tape::NodeId z_sh, Tape::NodeId z_pv);

// Negated, scaled Frobenius norm of the pairwise-cosine matrix between
// shared codes of the two domains. In [-1, 0].
Tape::NodeId similarity_loss_node(Tape& tape, Tape::NodeId z_sh_src,
                                  Tape::NodeId z_sh_tgt);

// ---- Plain evaluation (thin wrappers over the recorded builders) -----------

struct AdvLosses {
  double v_d;
  double v_g;
};

AdvLosses adv_losses(const Matrix& d_real, const Matrix& d_fake_src,
                     const Matrix& d_fake_tgt, const Matrix& d_fake_rnd, AdvMode mode);

struct CycleLosses {
  double l1;
  double l2;
};

CycleLosses cycle_losses(const Matrix& x_src, const Matrix& x_src_hat,
                         const Matrix& x_tgt_hat);

double dissimilarity_loss(const Matrix& z_sh, const Matrix& z_pv);
double similarity_loss(const Matrix& z_sh_src, const Matrix& z_sh_tgt);

double total_objective(double v_g, double l1, double l2, double l_dis, double l_sim,
                       double alpha, double beta);

}  // namespace irad

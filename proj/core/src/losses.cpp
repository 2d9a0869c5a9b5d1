#include "irad/losses.hpp"

#include <array>
#include <cmath>

#include "irad/errors.hpp"

namespace irad {

const char* adv_mode_name(AdvMode m) {
  return m == AdvMode::vanilla ? "vanilla" : "least_squares";
}

AdvMode adv_mode_from_name(const std::string& name) {
  if (name == "vanilla") return AdvMode::vanilla;
  if (name == "least_squares") return AdvMode::least_squares;
  throw ParseError("unknown adversarial mode '" + name + "'");
}

namespace {

void check_score_column(const Tape& tape, Tape::NodeId id, const char* what) {
  const Matrix& m = tape.value(id);
  if (m.cols() != 1 || m.rows() == 0) {
    throw ShapeError(std::string(what) + ": expected non-empty Bx1 scores, got " +
                     shape_string(m));
  }
}

void check_equal_batches(const Tape& tape, Tape::NodeId a, Tape::NodeId b,
                         const char* what) {
  if (tape.value(a).rows() != tape.value(b).rows()) {
    throw ShapeError(std::string(what) + ": batch sizes differ, " +
                     shape_string(tape.value(a)) + " vs " + shape_string(tape.value(b)));
  }
}

}  // namespace

Tape::NodeId adv_discriminator_loss(Tape& tape, Tape::NodeId d_real,
                                    std::span<const Tape::NodeId> d_fakes, AdvMode mode) {
  check_score_column(tape, d_real, "adv_discriminator_loss");
  if (d_fakes.empty()) throw ContractError("adv_discriminator_loss: no fake streams");
  for (Tape::NodeId f : d_fakes) {
    check_score_column(tape, f, "adv_discriminator_loss");
    check_equal_batches(tape, d_real, f, "adv_discriminator_loss");
  }
  const double w = 1.0 / static_cast<double>(d_fakes.size());
  Tape::NodeId loss;
  if (mode == AdvMode::vanilla) {
    // -mean log sigmoid(real) - avg_fakes mean log(1 - sigmoid(fake))
    loss = tape.mean_all(tape.softplus(tape.affine(d_real, -1.0, 0.0)));
    for (Tape::NodeId f : d_fakes) {
      Tape::NodeId term = tape.affine(tape.mean_all(tape.softplus(f)), w, 0.0);
      loss = tape.add(loss, term);
    }
  } else {
    // mean (real - 1)^2 + avg_fakes mean fake^2, raw scores
    loss = tape.mean_all(tape.square(tape.affine(d_real, 1.0, -1.0)));
    for (Tape::NodeId f : d_fakes) {
      Tape::NodeId term = tape.affine(tape.mean_all(tape.square(f)), w, 0.0);
      loss = tape.add(loss, term);
    }
  }
  return loss;
}

Tape::NodeId adv_generator_loss(Tape& tape, std::span<const Tape::NodeId> d_fakes,
                                AdvMode mode) {
  if (d_fakes.empty()) throw ContractError("adv_generator_loss: no fake streams");
  for (Tape::NodeId f : d_fakes) check_score_column(tape, f, "adv_generator_loss");
  const double w = 1.0 / static_cast<double>(d_fakes.size());
  Tape::NodeId loss = tape.constant(Matrix(1, 1));
  for (Tape::NodeId f : d_fakes) {
    Tape::NodeId term;
    if (mode == AdvMode::vanilla) {
      // non-saturating: -mean log sigmoid(fake)
      term = tape.mean_all(tape.softplus(tape.affine(f, -1.0, 0.0)));
    } else {
      term = tape.mean_all(tape.square(tape.affine(f, 1.0, -1.0)));
    }
    loss = tape.add(loss, tape.affine(term, w, 0.0));
  }
  return loss;
}

Tape::NodeId cycle_loss_node(Tape& tape, Tape::NodeId x, Tape::NodeId x_hat) {
  if (!tape.value(x).same_shape(tape.value(x_hat))) {
    throw ShapeError("cycle_loss: " + shape_string(tape.value(x)) + " vs " +
                     shape_string(tape.value(x_hat)));
  }
  return tape.mean_all(tape.row_norms(tape.sub(x, x_hat)));
}

Tape::NodeId dissimilarity_loss_node(Tape& tape, Tape::NodeId z_sh, Tape::NodeId z_pv) {
  check_equal_batches(tape, z_sh, z_pv, "dissimilarity_loss");
  if (tape.value(z_sh).cols() != tape.value(z_pv).cols()) {
    throw ShapeError("dissimilarity_loss: code dims differ, " +
                     shape_string(tape.value(z_sh)) + " vs " +
                     shape_string(tape.value(z_pv)));
  }
  const double batch = static_cast<double>(tape.value(z_sh).rows());
  Tape::NodeId gram =
      tape.matmul_nt(tape.row_normalize(z_sh), tape.row_normalize(z_pv));
  return tape.affine(tape.frobenius_norm(gram), 1.0 / batch, 0.0);
}

Tape::NodeId similarity_loss_node(Tape& tape, Tape::NodeId z_sh_src,
                                  Tape::NodeId z_sh_tgt) {
  if (tape.value(z_sh_src).cols() != tape.value(z_sh_tgt).cols()) {
    throw ShapeError("similarity_loss: code dims differ, " +
                     shape_string(tape.value(z_sh_src)) + " vs " +
                     shape_string(tape.value(z_sh_tgt)));
  }
  const double bs = static_cast<double>(tape.value(z_sh_src).rows());
  const double bt = static_cast<double>(tape.value(z_sh_tgt).rows());
  Tape::NodeId gram =
      tape.matmul_nt(tape.row_normalize(z_sh_src), tape.row_normalize(z_sh_tgt));
  return tape.affine(tape.frobenius_norm(gram), -1.0 / std::sqrt(bs * bt), 0.0);
}

AdvLosses adv_losses(const Matrix& d_real, const Matrix& d_fake_src,
                     const Matrix& d_fake_tgt, const Matrix& d_fake_rnd, AdvMode mode) {
  Tape tape;
  const Tape::NodeId real = tape.constant(d_real);
  const std::array<Tape::NodeId, 3> fakes = {
      tape.constant(d_fake_src), tape.constant(d_fake_tgt), tape.constant(d_fake_rnd)};
  const Tape::NodeId v_d = adv_discriminator_loss(tape, real, fakes, mode);
  const Tape::NodeId v_g = adv_generator_loss(tape, fakes, mode);
  return {tape.value(v_d)(0, 0), tape.value(v_g)(0, 0)};
}

CycleLosses cycle_losses(const Matrix& x_src, const Matrix& x_src_hat,
                         const Matrix& x_tgt_hat) {
  Tape tape;
  const Tape::NodeId x = tape.constant(x_src);
  const Tape::NodeId l1 = cycle_loss_node(tape, x, tape.constant(x_src_hat));
  const Tape::NodeId l2 = cycle_loss_node(tape, x, tape.constant(x_tgt_hat));
  return {tape.value(l1)(0, 0), tape.value(l2)(0, 0)};
}

double dissimilarity_loss(const Matrix& z_sh, const Matrix& z_pv) {
  Tape tape;
  const Tape::NodeId loss =
      dissimilarity_loss_node(tape, tape.constant(z_sh), tape.constant(z_pv));
  return tape.value(loss)(0, 0);
}

double similarity_loss(const Matrix& z_sh_src, const Matrix& z_sh_tgt) {
  Tape tape;
  const Tape::NodeId loss =
      similarity_loss_node(tape, tape.constant(z_sh_src), tape.constant(z_sh_tgt));
  return tape.value(loss)(0, 0);
}

double total_objective(double v_g, double l1, double l2, double l_dis, double l_sim,
                       double alpha, double beta) {
  return v_g + alpha * (l1 + l2) + beta * (l_dis + l_sim);
}

}  // namespace irad

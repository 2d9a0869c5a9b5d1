#pragma once

#include <cstdint>
#include <string>

#include "irad/losses.hpp"
#include "irad/matrix.hpp"
#include "irad/mlp.hpp"
#include "irad/rng.hpp"

namespace irad {

// How shared and private codes are combined before generation. Concatenation
// keeps the two subspaces separable; sum requires d_z == d_p and mirrors the
// additive formulation.
enum class Combine { concat, sum };

const char* combine_name(Combine c);
Combine combine_from_name(const std::string& name);

struct ModelConfig {
  std::size_t d_x = 20;
  std::size_t d_z = 8;
  std::size_t d_p = 8;
  std::size_t hidden = 32;
  std::size_t hidden_layers = 2;
  Activation hidden_act = Activation::tanh;
  AdvMode adv_mode = AdvMode::vanilla;
  Combine combine = Combine::concat;
};

// The four networks: shared encoder, source-private encoder, source
// generator, source discriminator. The discriminator emits raw scores; the
// sigmoid of vanilla mode lives in the loss.
struct IradModel {
  Mlp e_sh;
  Mlp e_pv;
  Mlp g_src;
  Mlp d_src;
  std::size_t d_x = 0;
  std::size_t d_z = 0;
  std::size_t d_p = 0;
  AdvMode adv_mode = AdvMode::vanilla;
  Combine combine = Combine::concat;

  std::size_t generator_in_dim() const {
    return combine == Combine::concat ? d_z + d_p : d_z;
  }
};

// Noise source that substitutes the private code: standard normal entries,
// one column per private dimension.
struct NoiseSpec {
  std::size_t dim = 0;

  Matrix sample(std::size_t batch, Rng& rng) const {
    return rng.normal_matrix(batch, dim);
  }
};

NoiseSpec noise_spec(const IradModel& m);

IradModel make_model(const ModelConfig& cfg, Rng& rng);

Matrix encode_shared(const IradModel& m, const Matrix& x);
Matrix encode_private(const IradModel& m, const Matrix& x);
// Combines codes per the model's combine mode and runs the generator.
Matrix generate(const IradModel& m, const Matrix& z_sh, const Matrix& z_pv);
// Raw Bx1 discriminator scores.
Matrix discriminate(const IradModel& m, const Matrix& x);
// Generation from shared codes of x_src and noise in place of the private
// code: generate(encode_shared(x), z) with z ~ N(0,1)^{B x d_p}.
Matrix make_x_rnd(const IradModel& m, const Matrix& x_src, Rng& rng);
// Deterministic core of make_x_rnd with the noise supplied by the caller.
Matrix make_x_rnd_with(const IradModel& m, const Matrix& x_src, const Matrix& z);

// Code combination helper shared by plain and recorded paths.
Matrix combine_codes(const IradModel& m, const Matrix& z_sh, const Matrix& z_pv);
Tape::NodeId combine_codes(const IradModel& m, Tape& tape, Tape::NodeId z_sh,
                           Tape::NodeId z_pv);

}  // namespace irad

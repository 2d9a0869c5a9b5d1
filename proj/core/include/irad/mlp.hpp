#pragma once

#include <span>
#include <vector>

#include "irad/matrix.hpp"
#include "irad/rng.hpp"
#include "irad/tape.hpp"

namespace irad {

// One dense layer: weight is in x out, bias is 1 x out.
struct Layer {
  Matrix weight;
  Matrix bias;
  Activation act = Activation::identity;
};

// Small feed-forward network. Consecutive layer dimensions chain; a forward
// pass on a B x in_dim batch yields B x out_dim.
struct Mlp {
  std::vector<Layer> layers;

  std::size_t in_dim() const { return layers.empty() ? 0 : layers.front().weight.rows(); }
  std::size_t out_dim() const { return layers.empty() ? 0 : layers.back().weight.cols(); }
};

// Builds a net with the given layer widths (dims.size() >= 2) and one
// activation per layer. Weights uniform in +-sqrt(6/(fan_in+fan_out)),
// biases zero.
Mlp make_mlp(std::span<const std::size_t> dims, std::span<const Activation> acts,
             Rng& rng);

// Plain inference pass, no gradient recording.
Matrix mlp_forward(const Mlp& net, const Matrix& x);

// Tape node ids for one network's parameters, in layer order.
struct MlpBinding {
  struct LayerNodes {
    Tape::NodeId weight;
    Tape::NodeId bias;
  };
  std::vector<LayerNodes> layers;
};

// Registers the net's parameters on the tape. Gradients flow into bindings
// created with track_grad=true; frozen nets bind as constants.
MlpBinding bind_mlp(Tape& tape, const Mlp& net, bool track_grad);

// Recorded forward pass through previously bound parameters.
Tape::NodeId mlp_forward(Tape& tape, const Mlp& net, const MlpBinding& binding,
                         Tape::NodeId x);

// Pointers to every parameter matrix of the net, layer order, weight then bias.
std::vector<Matrix*> mlp_parameters(Mlp& net);
std::vector<const Matrix*> mlp_parameters(const Mlp& net);

// Gradients read back from a tape after backward(), aligned with
// mlp_parameters order.
std::vector<Matrix> mlp_gradients(const Tape& tape, const MlpBinding& binding);

}  // namespace irad

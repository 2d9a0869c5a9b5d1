#include "irad/mlp.hpp"

#include <cmath>
#include <string>

#include "irad/errors.hpp"

namespace irad {

Mlp make_mlp(std::span<const std::size_t> dims, std::span<const Activation> acts,
             Rng& rng) {
  if (dims.size() < 2) throw ContractError("make_mlp: need at least input and output dims");
  if (acts.size() != dims.size() - 1) {
    throw ContractError("make_mlp: expected " + std::to_string(dims.size() - 1) +
                        " activations, got " + std::to_string(acts.size()));
  }
  Mlp net;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Layer layer;
    const std::size_t fan_in = dims[l], fan_out = dims[l + 1];
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    layer.weight = Matrix(fan_in, fan_out);
    for (std::size_t i = 0; i < layer.weight.size(); ++i)
      layer.weight.data()[i] = rng.uniform(-bound, bound);
    layer.bias = Matrix(1, fan_out);
    layer.act = acts[l];
    net.layers.push_back(std::move(layer));
  }
  return net;
}

namespace {

void check_input(const Mlp& net, const Matrix& x) {
  if (x.cols() != net.in_dim()) {
    throw ShapeError("mlp_forward: input " + shape_string(x) + " incompatible with net in_dim " +
                     std::to_string(net.in_dim()));
  }
}

double apply_act(Activation act, double v) {
  switch (act) {
    case Activation::identity: return v;
    case Activation::relu: return v > 0.0 ? v : 0.0;
    case Activation::tanh: return std::tanh(v);
    case Activation::sigmoid:
      return v >= 0.0 ? 1.0 / (1.0 + std::exp(-v)) : std::exp(v) / (1.0 + std::exp(v));
  }
  return v;
}

}  // namespace

Matrix mlp_forward(const Mlp& net, const Matrix& x) {
  check_input(net, x);
  Matrix h = x;
  for (const Layer& layer : net.layers) {
    Matrix z = matmul(h, layer.weight);
    for (std::size_t i = 0; i < z.rows(); ++i)
      for (std::size_t j = 0; j < z.cols(); ++j)
        z(i, j) = apply_act(layer.act, z(i, j) + layer.bias(0, j));
    h = std::move(z);
  }
  return h;
}

MlpBinding bind_mlp(Tape& tape, const Mlp& net, bool track_grad) {
  MlpBinding binding;
  for (const Layer& layer : net.layers) {
    MlpBinding::LayerNodes nodes{};
    nodes.weight = track_grad ? tape.parameter(layer.weight) : tape.constant(layer.weight);
    nodes.bias = track_grad ? tape.parameter(layer.bias) : tape.constant(layer.bias);
    binding.layers.push_back(nodes);
  }
  return binding;
}

Tape::NodeId mlp_forward(Tape& tape, const Mlp& net, const MlpBinding& binding,
                         Tape::NodeId x) {
  check_input(net, tape.value(x));
  if (binding.layers.size() != net.layers.size()) {
    throw ContractError("mlp_forward: binding does not match net layer count");
  }
  Tape::NodeId h = x;
  for (std::size_t l = 0; l < net.layers.size(); ++l) {
    h = tape.matmul(h, binding.layers[l].weight);
    h = tape.add_row(h, binding.layers[l].bias);
    h = tape.activation(h, net.layers[l].act);
  }
  return h;
}

std::vector<Matrix*> mlp_parameters(Mlp& net) {
  std::vector<Matrix*> params;
  for (Layer& layer : net.layers) {
    params.push_back(&layer.weight);
    params.push_back(&layer.bias);
  }
  return params;
}

std::vector<const Matrix*> mlp_parameters(const Mlp& net) {
  std::vector<const Matrix*> params;
  for (const Layer& layer : net.layers) {
    params.push_back(&layer.weight);
    params.push_back(&layer.bias);
  }
  return params;
}

std::vector<Matrix> mlp_gradients(const Tape& tape, const MlpBinding& binding) {
  std::vector<Matrix> grads;
  for (const auto& nodes : binding.layers) {
    grads.push_back(tape.grad(nodes.weight));
    grads.push_back(tape.grad(nodes.bias));
  }
  return grads;
}

}  // namespace irad

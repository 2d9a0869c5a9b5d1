#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "irad/matrix.hpp"

namespace irad {

enum class Activation { identity, relu, tanh, sigmoid };

const char* activation_name(Activation a);
Activation activation_from_name(const std::string& name);

// Reverse-mode gradient tape over Matrix values. Nodes are appended in
// topological order during the forward pass; backward() walks them in
// reverse. Replaying the same forward graph from the same inputs reproduces
// the recorded values bit-identically (all kernels are deterministic).
//
// A tape is confined to one training step; build, run backward once, drop.
class Tape {
 public:
  using NodeId = std::size_t;

  // Leaf the gradient is not tracked through.
  NodeId constant(Matrix value);
  // Leaf with a gradient slot (network weights, biases).
  NodeId parameter(Matrix value);

  const Matrix& value(NodeId id) const { return nodes_[id].value; }
  // Valid after backward(); zero matrix for untouched nodes.
  const Matrix& grad(NodeId id) const { return nodes_[id].grad; }

  NodeId matmul(NodeId a, NodeId b);
  // a * b^T without materializing the transpose.
  NodeId matmul_nt(NodeId a, NodeId b);
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  // Broadcasts a 1xC row over every row of a BxC matrix.
  NodeId add_row(NodeId a, NodeId row);
  // Elementwise scale * x + shift.
  NodeId affine(NodeId a, double scale, double shift);
  NodeId square(NodeId a);
  NodeId activation(NodeId a, Activation act);
  // log(1 + e^x), computed stably; gradient is sigmoid(x).
  NodeId softplus(NodeId a);
  NodeId concat_cols(NodeId a, NodeId b);
  // Scales each row to unit L2 norm; zero rows pass through unchanged.
  NodeId row_normalize(NodeId a);
  // Bx1 vector of row L2 norms.
  NodeId row_norms(NodeId a);
  // 1x1 Frobenius norm.
  NodeId frobenius_norm(NodeId a);
  NodeId sum_all(NodeId a);
  NodeId mean_all(NodeId a);

  // Seeds d(loss)/d(loss) = 1 and accumulates gradients into every parameter
  // reachable from `loss`, which must be 1x1.
  void backward(NodeId loss);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    std::function<void(Tape&)> backprop;  // empty for leaves
  };

  NodeId push(Matrix value, bool requires_grad, std::function<void(Tape&)> backprop);
  bool tracked(NodeId id) const { return nodes_[id].requires_grad; }
  void accumulate(NodeId id, const Matrix& g);

  std::vector<Node> nodes_;
};

}  // namespace irad

#include "irad/tape.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "irad/errors.hpp"

namespace irad {

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::identity: return "identity";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
    case Activation::sigmoid: return "sigmoid";
  }
  return "identity";
}

Activation activation_from_name(const std::string& name) {
  if (name == "identity") return Activation::identity;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  if (name == "sigmoid") return Activation::sigmoid;
  throw ParseError("unknown activation '" + name + "'");
}

namespace {

double sigmoid_scalar(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus_scalar(double x) {
  // max(x,0) + log1p(exp(-|x|))
  return (x > 0.0 ? x : 0.0) + std::log1p(std::exp(-std::abs(x)));
}

}  // namespace

Tape::NodeId Tape::push(Matrix value, bool requires_grad,
                        std::function<void(Tape&)> backprop) {
  Node n;
  if (requires_grad) n.grad = Matrix(value.rows(), value.cols());
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  n.backprop = std::move(backprop);
  nodes_.push_back(std::move(n));
  return nodes_.size() - 1;
}

void Tape::accumulate(NodeId id, const Matrix& g) {
  if (nodes_[id].requires_grad) add_inplace(nodes_[id].grad, g);
}

Tape::NodeId Tape::constant(Matrix value) { return push(std::move(value), false, {}); }

Tape::NodeId Tape::parameter(Matrix value) { return push(std::move(value), true, {}); }

Tape::NodeId Tape::matmul(NodeId a, NodeId b) {
  Matrix out = irad::matmul(value(a), value(b));
  const bool track = tracked(a) || tracked(b);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, b, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      if (t.tracked(a)) t.accumulate(a, irad::matmul_nt(g, t.value(b)));
      if (t.tracked(b)) t.accumulate(b, irad::matmul_tn(t.value(a), g));
    };
  }
  return id;
}

Tape::NodeId Tape::matmul_nt(NodeId a, NodeId b) {
  Matrix out = irad::matmul_nt(value(a), value(b));
  const bool track = tracked(a) || tracked(b);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, b, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      if (t.tracked(a)) t.accumulate(a, irad::matmul(g, t.value(b)));
      if (t.tracked(b)) t.accumulate(b, irad::matmul_tn(g, t.value(a)));
    };
  }
  return id;
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  Matrix out = irad::add(value(a), value(b));
  const bool track = tracked(a) || tracked(b);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, b, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      t.accumulate(a, g);
      t.accumulate(b, g);
    };
  }
  return id;
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
  Matrix out = irad::sub(value(a), value(b));
  const bool track = tracked(a) || tracked(b);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, b, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      t.accumulate(a, g);
      if (t.tracked(b)) {
        Matrix neg = g;
        scale_inplace(neg, -1.0);
        t.accumulate(b, neg);
      }
    };
  }
  return id;
}

Tape::NodeId Tape::add_row(NodeId a, NodeId row) {
  const Matrix& x = value(a);
  const Matrix& r = value(row);
  if (r.rows() != 1 || r.cols() != x.cols()) {
    throw ShapeError("add_row: bias " + shape_string(r) + " does not broadcast over " +
                     shape_string(x));
  }
  Matrix out = x;
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j) out(i, j) += r(0, j);
  const bool track = tracked(a) || tracked(row);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, row, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      t.accumulate(a, g);
      if (t.tracked(row)) {
        Matrix rg(1, g.cols());
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < g.cols(); ++j) rg(0, j) += g(i, j);
        t.accumulate(row, rg);
      }
    };
  }
  return id;
}

Tape::NodeId Tape::affine(NodeId a, double scale, double shift) {
  Matrix out = value(a);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = scale * out.data()[i] + shift;
  const bool track = tracked(a);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, scale, id](Tape& t) {
      Matrix g = t.nodes_[id].grad;
      scale_inplace(g, scale);
      t.accumulate(a, g);
    };
  }
  return id;
}

Tape::NodeId Tape::square(NodeId a) {
  Matrix out = value(a);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= out.data()[i];
  const bool track = tracked(a);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      const Matrix& x = t.value(a);
      Matrix da(x.rows(), x.cols());
      for (std::size_t i = 0; i < x.size(); ++i)
        da.data()[i] = 2.0 * x.data()[i] * g.data()[i];
      t.accumulate(a, da);
    };
  }
  return id;
}

Tape::NodeId Tape::activation(NodeId a, Activation act) {
  if (act == Activation::identity) return a;
  const Matrix& x = value(a);
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x.data()[i];
    switch (act) {
      case Activation::relu: out.data()[i] = v > 0.0 ? v : 0.0; break;
      case Activation::tanh: out.data()[i] = std::tanh(v); break;
      case Activation::sigmoid: out.data()[i] = sigmoid_scalar(v); break;
      case Activation::identity: out.data()[i] = v; break;
    }
  }
  const bool track = tracked(a);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, act, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      const Matrix& x = t.value(a);
      const Matrix& y = t.value(id);
      Matrix da(x.rows(), x.cols());
      for (std::size_t i = 0; i < x.size(); ++i) {
        double d = 1.0;
        switch (act) {
          case Activation::relu: d = x.data()[i] > 0.0 ? 1.0 : 0.0; break;
          case Activation::tanh: d = 1.0 - y.data()[i] * y.data()[i]; break;
          case Activation::sigmoid: d = y.data()[i] * (1.0 - y.data()[i]); break;
          case Activation::identity: d = 1.0; break;
        }
        da.data()[i] = d * g.data()[i];
      }
      t.accumulate(a, da);
    };
  }
  return id;
}

Tape::NodeId Tape::softplus(NodeId a) {
  const Matrix& x = value(a);
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) out.data()[i] = softplus_scalar(x.data()[i]);
  const bool track = tracked(a);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      const Matrix& x = t.value(a);
      Matrix da(x.rows(), x.cols());
      for (std::size_t i = 0; i < x.size(); ++i)
        da.data()[i] = sigmoid_scalar(x.data()[i]) * g.data()[i];
      t.accumulate(a, da);
    };
  }
  return id;
}

Tape::NodeId Tape::concat_cols(NodeId a, NodeId b) {
  Matrix out = hcat(value(a), value(b));
  const bool track = tracked(a) || tracked(b);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, b, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      const std::size_t ca = t.value(a).cols();
      const std::size_t cb = t.value(b).cols();
      if (t.tracked(a)) {
        Matrix ga(g.rows(), ca);
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < ca; ++j) ga(i, j) = g(i, j);
        t.accumulate(a, ga);
      }
      if (t.tracked(b)) {
        Matrix gb(g.rows(), cb);
        for (std::size_t i = 0; i < g.rows(); ++i)
          for (std::size_t j = 0; j < cb; ++j) gb(i, j) = g(i, ca + j);
        t.accumulate(b, gb);
      }
    };
  }
  return id;
}

Tape::NodeId Tape::row_normalize(NodeId a) {
  const Matrix& x = value(a);
  Matrix out(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double n2 = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) n2 += x(i, j) * x(i, j);
    const double n = std::sqrt(n2);
    if (n > 0.0) {
      for (std::size_t j = 0; j < x.cols(); ++j) out(i, j) = x(i, j) / n;
    }
  }
  const bool track = tracked(a);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      const Matrix& x = t.value(a);
      const Matrix& y = t.value(id);
      Matrix da(x.rows(), x.cols());
      for (std::size_t i = 0; i < x.rows(); ++i) {
        double n2 = 0.0;
        for (std::size_t j = 0; j < x.cols(); ++j) n2 += x(i, j) * x(i, j);
        const double n = std::sqrt(n2);
        if (n == 0.0) continue;  // subgradient 0 at the origin
        double dot = 0.0;
        for (std::size_t j = 0; j < x.cols(); ++j) dot += y(i, j) * g(i, j);
        for (std::size_t j = 0; j < x.cols(); ++j)
          da(i, j) = (g(i, j) - y(i, j) * dot) / n;
      }
      t.accumulate(a, da);
    };
  }
  return id;
}

Tape::NodeId Tape::row_norms(NodeId a) {
  const Matrix& x = value(a);
  Matrix out(x.rows(), 1);
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double n2 = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) n2 += x(i, j) * x(i, j);
    out(i, 0) = std::sqrt(n2);
  }
  const bool track = tracked(a);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, id](Tape& t) {
      const Matrix& g = t.nodes_[id].grad;
      const Matrix& x = t.value(a);
      const Matrix& h = t.value(id);
      Matrix da(x.rows(), x.cols());
      for (std::size_t i = 0; i < x.rows(); ++i) {
        if (h(i, 0) == 0.0) continue;
        const double gi = g(i, 0) / h(i, 0);
        for (std::size_t j = 0; j < x.cols(); ++j) da(i, j) = gi * x(i, j);
      }
      t.accumulate(a, da);
    };
  }
  return id;
}

Tape::NodeId Tape::frobenius_norm(NodeId a) {
  const Matrix& x = value(a);
  double n2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) n2 += x.data()[i] * x.data()[i];
  Matrix out(1, 1);
  out(0, 0) = std::sqrt(n2);
  const bool track = tracked(a);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, id](Tape& t) {
      const double f = t.value(id)(0, 0);
      if (f == 0.0) return;
      const double g = t.nodes_[id].grad(0, 0) / f;
      const Matrix& x = t.value(a);
      Matrix da = x;
      scale_inplace(da, g);
      t.accumulate(a, da);
    };
  }
  return id;
}

Tape::NodeId Tape::sum_all(NodeId a) {
  const Matrix& x = value(a);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x.data()[i];
  Matrix out(1, 1);
  out(0, 0) = s;
  const bool track = tracked(a);
  NodeId id = push(std::move(out), track, {});
  if (track) {
    nodes_[id].backprop = [a, id](Tape& t) {
      const double g = t.nodes_[id].grad(0, 0);
      const Matrix& x = t.value(a);
      t.accumulate(a, Matrix(x.rows(), x.cols(), g));
    };
  }
  return id;
}

Tape::NodeId Tape::mean_all(NodeId a) {
  const std::size_t n = value(a).size();
  if (n == 0) throw ShapeError("mean_all: empty matrix");
  return affine(sum_all(a), 1.0 / static_cast<double>(n), 0.0);
}

void Tape::backward(NodeId loss) {
  const Matrix& out = value(loss);
  if (out.rows() != 1 || out.cols() != 1) {
    throw ContractError("backward: terminal node must be scalar, got " +
                        shape_string(out));
  }
  if (!nodes_[loss].requires_grad) return;  // loss constant in every parameter
  nodes_[loss].grad(0, 0) = 1.0;
  for (std::size_t i = loss + 1; i-- > 0;) {
    if (nodes_[i].requires_grad && nodes_[i].backprop) nodes_[i].backprop(*this);
  }
}

}  // namespace irad

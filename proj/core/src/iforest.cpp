#include "irad/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "irad/errors.hpp"

namespace irad {

double c_factor(std::size_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double nd = static_cast<double>(n);
  const double harmonic = std::log(nd - 1.0) + 0.5772156649;
  return 2.0 * harmonic - 2.0 * (nd - 1.0) / nd;
}

namespace {

struct TreeBuilder {
  const Matrix& x;
  ITree& tree;
  Rng& rng;

  // Builds the subtree over rows[begin, end) and returns its node index.
  int build(std::vector<std::size_t>& rows, std::size_t begin, std::size_t end,
            int depth) {
    const int node_index = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(ITreeNode{});
    tree.nodes[node_index].size = static_cast<int>(end - begin);
    if (end - begin <= 1 || depth >= tree.height_limit) return node_index;

    // Candidate features are those not constant over this node's rows.
    std::vector<int> usable;
    for (std::size_t f = 0; f < x.cols(); ++f) {
      const double first = x(rows[begin], f);
      for (std::size_t i = begin + 1; i < end; ++i) {
        if (x(rows[i], f) != first) {
          usable.push_back(static_cast<int>(f));
          break;
        }
      }
    }
    if (usable.empty()) return node_index;  // all duplicates

    const int feature = usable[rng.uniform_index(usable.size())];
    double lo = x(rows[begin], feature), hi = lo;
    for (std::size_t i = begin + 1; i < end; ++i) {
      lo = std::min(lo, x(rows[i], feature));
      hi = std::max(hi, x(rows[i], feature));
    }
    double split = lo + rng.uniform() * (hi - lo);
    if (split <= lo || split >= hi) {  // keep the cut strictly inside
      split = std::nextafter(lo, hi);
      if (split >= hi) return node_index;  // adjacent doubles, no strict cut exists
    }

    auto mid_it = std::partition(rows.begin() + begin, rows.begin() + end,
                                 [&](std::size_t r) { return x(r, feature) < split; });
    const std::size_t mid = static_cast<std::size_t>(mid_it - rows.begin());
    const int left = build(rows, begin, mid, depth + 1);
    const int right = build(rows, mid, end, depth + 1);
    tree.nodes[node_index].feature = feature;
    tree.nodes[node_index].threshold = split;
    tree.nodes[node_index].left = left;
    tree.nodes[node_index].right = right;
    return node_index;
  }
};

std::vector<std::size_t> draw_subsample(std::size_t n, std::size_t psi, Rng& rng) {
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (std::size_t i = 0; i < psi; ++i) {
    const std::size_t j = i + rng.uniform_index(n - i);
    std::swap(all[i], all[j]);
  }
  all.resize(psi);
  return all;
}

}  // namespace

IsolationForest fit_forest(const Matrix& x, int n_trees, std::size_t psi, Rng& rng) {
  if (x.rows() < 2) throw ContractError("fit_forest: need at least 2 rows");
  if (psi < 2 || psi > x.rows()) {
    throw ContractError("fit_forest: psi " + std::to_string(psi) +
                        " out of range for " + std::to_string(x.rows()) + " rows");
  }
  if (n_trees < 1) throw ContractError("fit_forest: n_trees must be >= 1");

  IsolationForest forest;
  forest.psi = psi;
  forest.dim = x.cols();
  forest.c_norm = c_factor(psi);
  const std::uint64_t base_seed = rng.next_u64();
  forest.trees.reserve(static_cast<std::size_t>(n_trees));
  for (int t = 0; t < n_trees; ++t) {
    Rng tree_rng(mix_seed(base_seed, static_cast<std::uint64_t>(t)));
    ITree tree;
    tree.height_limit =
        static_cast<int>(std::ceil(std::log2(static_cast<double>(psi))));
    tree.sample = draw_subsample(x.rows(), psi, tree_rng);
    std::vector<std::size_t> rows = tree.sample;
    TreeBuilder builder{x, tree, tree_rng};
    builder.build(rows, 0, rows.size(), 0);
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

double tree_path_length(const ITree& tree, std::span<const double> row) {
  int node = 0;
  int depth = 0;
  while (tree.nodes[node].feature >= 0) {
    const ITreeNode& n = tree.nodes[node];
    node = row[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    ++depth;
  }
  return static_cast<double>(depth) +
         c_factor(static_cast<std::size_t>(tree.nodes[node].size));
}

double score_from_mean_path(double mean_path, double c_norm) {
  return std::pow(2.0, -mean_path / c_norm);
}

double score_row(const IsolationForest& forest, std::span<const double> row) {
  if (row.size() != forest.dim) {
    throw ShapeError("score_row: point has " + std::to_string(row.size()) +
                     " features, forest was fit on " + std::to_string(forest.dim));
  }
  double sum = 0.0;
  for (const ITree& tree : forest.trees) sum += tree_path_length(tree, row);
  return score_from_mean_path(sum / static_cast<double>(forest.trees.size()),
                              forest.c_norm);
}

std::vector<double> score_all(const IsolationForest& forest, const Matrix& x) {
  std::vector<double> scores(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) scores[i] = score_row(forest, x.row(i));
  return scores;
}

}  // namespace irad

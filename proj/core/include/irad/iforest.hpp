#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "irad/matrix.hpp"
#include "irad/rng.hpp"

namespace irad {

// One isolation tree over a subsample. Nodes live in a flat pool; nodes[0]
// is the root. feature < 0 marks a leaf.
struct ITreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int size = 0;  // points that reached this node
};

struct ITree {
  std::vector<ITreeNode> nodes;
  int height_limit = 0;
  // Rows of the training matrix this tree was grown on; kept for inspection.
  std::vector<std::size_t> sample;
};

struct IsolationForest {
  std::vector<ITree> trees;
  std::size_t psi = 0;
  std::size_t dim = 0;
  double c_norm = 0.0;  // c(psi)
};

// Expected path length of an unsuccessful BST search over n points:
// c(n) = 2 H(n-1) - 2(n-1)/n for n > 2, c(2) = 1, c(n <= 1) = 0.
double c_factor(std::size_t n);

// Grows n_trees trees, each on a psi-subsample drawn without replacement,
// height limit ceil(log2 psi). Per-tree RNG streams are derived from the
// passed rng so results do not depend on construction order.
IsolationForest fit_forest(const Matrix& x, int n_trees, std::size_t psi, Rng& rng);

// Path length of one point through one tree, with the c(size) leaf adjustment.
double tree_path_length(const ITree& tree, std::span<const double> row);

// Anomaly score in (0,1): 2^(-E[h]/c(psi)). Higher means more anomalous.
double score_from_mean_path(double mean_path, double c_norm);
double score_row(const IsolationForest& forest, std::span<const double> row);
std::vector<double> score_all(const IsolationForest& forest, const Matrix& x);

}  // namespace irad

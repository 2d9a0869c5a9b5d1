#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "irad/errors.hpp"
#include "irad/eval.hpp"
#include "irad/iforest.hpp"
#include "irad/rng.hpp"

using namespace irad;

TEST_CASE("path-length normalizer conventions and formula") {
  CHECK(c_factor(0) == 0.0);
  CHECK(c_factor(1) == 0.0);
  CHECK(c_factor(2) == 1.0);
  // direct evaluation of 2 H(n-1) - 2(n-1)/n
  const double expected = 2.0 * (std::log(255.0) + 0.5772156649) - 2.0 * 255.0 / 256.0;
  CHECK(c_factor(256) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(c_factor(100) > c_factor(10));
}

TEST_CASE("psi=2 on two distinct points gives one split with two unit leaves") {
  const Matrix x = Matrix::from_rows({{0.0}, {1.0}});
  Rng rng(71);
  const IsolationForest forest = fit_forest(x, 10, 2, rng);
  for (const ITree& tree : forest.trees) {
    REQUIRE(tree.nodes.size() == 3);
    const ITreeNode& root = tree.nodes[0];
    CHECK(root.feature == 0);
    CHECK(root.threshold > 0.0);
    CHECK(root.threshold < 1.0);
    CHECK(tree.nodes[root.left].feature == -1);
    CHECK(tree.nodes[root.right].feature == -1);
    CHECK(tree.nodes[root.left].size == 1);
    CHECK(tree.nodes[root.right].size == 1);
  }
}

TEST_CASE("duplicate-only data yields single leaves and uniform scores") {
  const Matrix x(8, 3, 2.5);
  Rng rng(72);
  const IsolationForest forest = fit_forest(x, 20, 8, rng);
  for (const ITree& tree : forest.trees) {
    REQUIRE(tree.nodes.size() == 1);
    CHECK(tree.nodes[0].feature == -1);
    CHECK(tree.nodes[0].size == 8);
  }
  const std::vector<double> scores = score_all(forest, x);
  for (double s : scores) CHECK(s == scores[0]);
}

TEST_CASE("tree structure bounds: at most 2*psi - 1 nodes, leaves within limit") {
  Rng data_rng(73);
  const Matrix x = data_rng.normal_matrix(256, 2);
  Rng rng(74);
  const IsolationForest forest = fit_forest(x, 100, 256, rng);
  CHECK(forest.trees.size() == 100);
  for (const ITree& tree : forest.trees) {
    CHECK(tree.nodes.size() <= 2 * 256 - 1);
    CHECK(tree.height_limit == 8);
    // walk depths
    std::function<void(int, int)> walk = [&](int node, int depth) {
      const ITreeNode& n = tree.nodes[node];
      if (n.feature < 0) {
        CHECK(depth <= tree.height_limit);
        return;
      }
      walk(n.left, depth + 1);
      walk(n.right, depth + 1);
    };
    walk(0, 0);
  }
}

TEST_CASE("split values lie strictly between the node's min and max") {
  Rng data_rng(75);
  const Matrix x = data_rng.normal_matrix(64, 3);
  Rng rng(76);
  const IsolationForest forest = fit_forest(x, 25, 32, rng);
  for (const ITree& tree : forest.trees) {
    // Recompute the rows reaching each node from the stored subsample.
    std::function<void(int, std::vector<std::size_t>)> walk =
        [&](int node, std::vector<std::size_t> rows) {
          const ITreeNode& n = tree.nodes[node];
          CHECK(static_cast<std::size_t>(n.size) == rows.size());
          if (n.feature < 0) return;
          double lo = x(rows[0], n.feature), hi = lo;
          std::vector<std::size_t> left_rows, right_rows;
          for (std::size_t r : rows) {
            lo = std::min(lo, x(r, n.feature));
            hi = std::max(hi, x(r, n.feature));
            if (x(r, n.feature) < n.threshold) left_rows.push_back(r);
            else right_rows.push_back(r);
          }
          CHECK(n.threshold > lo);
          CHECK(n.threshold < hi);
          CHECK_FALSE(left_rows.empty());
          CHECK_FALSE(right_rows.empty());
          walk(n.left, std::move(left_rows));
          walk(n.right, std::move(right_rows));
        };
    walk(0, tree.sample);
  }
}

TEST_CASE("score definition: mean path equal to c(psi) maps to one half") {
  CHECK(score_from_mean_path(c_factor(256), c_factor(256)) == doctest::Approx(0.5));
  // monotone decreasing in the mean path length
  double prev = 2.0;
  for (double h = 0.0; h < 16.0; h += 1.0) {
    const double s = score_from_mean_path(h, c_factor(256));
    CHECK(s < prev);
    prev = s;
  }
}

TEST_CASE("the single far outlier in the 99+1 instance gets the top score") {
  Matrix x(100, 1);
  for (std::size_t i = 0; i < 99; ++i) x(i, 0) = 0.0;
  x(99, 0) = 100.0;
  Rng rng(77);
  const IsolationForest forest = fit_forest(x, 100, 64, rng);
  const std::vector<double> scores = score_all(forest, x);
  const std::size_t top =
      std::max_element(scores.begin(), scores.end()) - scores.begin();
  CHECK(top == 99);
  for (std::size_t i = 0; i < 99; ++i) CHECK(scores[i] < scores[99]);
}

TEST_CASE("scores stay in (0,1) and deterministic under a fixed seed") {
  Rng data_rng(78);
  const Matrix x = data_rng.normal_matrix(300, 4);
  Rng rng_a(79), rng_b(79);
  const IsolationForest a = fit_forest(x, 50, 128, rng_a);
  const IsolationForest b = fit_forest(x, 50, 128, rng_b);
  const std::vector<double> sa = score_all(a, x);
  const std::vector<double> sb = score_all(b, x);
  for (std::size_t i = 0; i < sa.size(); ++i) {
    CHECK(sa[i] == sb[i]);
    CHECK(sa[i] > 0.0);
    CHECK(sa[i] < 1.0);
  }
}

TEST_CASE("two-dimensional gaussian with box outliers is separated") {
  Rng rng(80);
  const std::size_t n_normal = 475, n_outlier = 25;
  Matrix x(n_normal + n_outlier, 2);
  std::vector<int> labels(n_normal + n_outlier, 0);
  for (std::size_t i = 0; i < n_normal; ++i) {
    x(i, 0) = rng.normal();
    x(i, 1) = rng.normal();
  }
  for (std::size_t i = n_normal; i < n_normal + n_outlier; ++i) {
    x(i, 0) = rng.uniform(-8.0, 8.0);
    x(i, 1) = rng.uniform(-8.0, 8.0);
    labels[i] = 1;
  }
  Rng fit_rng(81);
  const IsolationForest forest = fit_forest(x, 100, 256, fit_rng);
  const std::vector<double> scores = score_all(forest, x);
  CHECK(auroc(scores, labels) >= 0.9);
}

TEST_CASE("contract violations") {
  Rng rng(82);
  CHECK_THROWS_AS(fit_forest(Matrix(1, 2), 10, 2, rng), ContractError);
  CHECK_THROWS_AS(fit_forest(Matrix(10, 2), 10, 11, rng), ContractError);
  CHECK_THROWS_AS(fit_forest(Matrix(10, 2), 0, 4, rng), ContractError);
  const IsolationForest forest = fit_forest(rng.normal_matrix(16, 3), 5, 8, rng);
  const std::vector<double> bad_row = {1.0, 2.0};
  CHECK_THROWS_AS(score_row(forest, bad_row), ShapeError);
}

#pragma once

#include <span>
#include <string>
#include <vector>

#include "irad/matrix.hpp"

namespace irad {

// Area under the ROC curve via rank statistics: P(score_anomaly >
// score_normal) + 0.5 P(tie). Throws UndefinedMetricError unless both
// classes are present.
double auroc(std::span<const double> scores, std::span<const int> labels);

// Square root of the Jensen-Shannon divergence between Bernoulli(p) and
// Bernoulli(q), base-2 logarithms, 0*log0 = 0. A metric with range [0, 1].
double js_distance_bernoulli(double p, double q);

// Joint-error lower bound check: eps_s + eps_t >= d_js(label marginals)^2 / 2.
struct ErrorReport {
  double eps_s = 0.0;
  double eps_t = 0.0;
  double d_js_labels = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

ErrorReport theorem1_check(std::span<const int> pred_s, std::span<const int> y_s,
                           std::span<const int> pred_t, std::span<const int> y_t,
                           double tol = 1e-9);

// Distance-vs-error check: d_js(empirical Y, empirical Yhat) <= sqrt(error).
struct LemmaReport {
  double d_js = 0.0;
  double sqrt_eps = 0.0;
  bool holds = false;
};

LemmaReport lemma_jsd_check(std::span<const int> pred, std::span<const int> y);

// Monotone score-to-label rule: label 1 iff score >= threshold.
struct ThresholdRule {
  double threshold = 0.0;

  int operator()(double score) const { return score >= threshold ? 1 : 0; }
};

std::vector<int> apply_threshold(std::span<const double> scores, ThresholdRule rule);

// One theorem check per distinct score value used as threshold on the
// pooled score set of both domains.
struct TheoryRow {
  double threshold = 0.0;
  ErrorReport report;
};

std::vector<TheoryRow> theorem_threshold_sweep(std::span<const double> scores_s,
                                               std::span<const int> y_s,
                                               std::span<const double> scores_t,
                                               std::span<const int> y_t);

void write_theory_report(const std::string& path, std::span<const TheoryRow> rows);

// Projection onto the top-2 principal components of the mean-centered
// covariance. The eigen-solve is a cyclic Jacobi iteration on the d x d
// covariance; each component's sign makes its largest-magnitude loading
// positive. Rank-0 input yields a zero projection (with a warning).
Matrix pca_2d(const Matrix& points);

struct Pca2dResult {
  Matrix projection;             // n x 2
  Matrix components;             // d x 2
  double component_variance[2];  // eigenvalues of the top-2 components
};

Pca2dResult pca_2d_full(const Matrix& points);

// All eigenvalues/eigenvectors of a symmetric matrix by cyclic Jacobi
// sweeps, eigenvalues descending. Columns of `vectors` are eigenvectors.
struct EigenDecomposition {
  std::vector<double> values;
  Matrix vectors;
};

EigenDecomposition jacobi_eigen_symmetric(Matrix a, int max_sweeps = 64);

}  // namespace irad

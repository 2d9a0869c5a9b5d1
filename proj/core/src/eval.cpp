#include "irad/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <set>

#include "irad/errors.hpp"
#include "irad/format.hpp"

namespace irad {

double auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw ContractError("auroc: " + std::to_string(scores.size()) + " scores vs " +
                        std::to_string(labels.size()) + " labels");
  }
  std::size_t n_pos = 0;
  for (int y : labels) n_pos += (y != 0);
  const std::size_t n = scores.size();
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) {
    throw UndefinedMetricError("auroc: undefined when only one class is present");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tie groups; every rank is a multiple of 0.5, so the
  // rank sum stays exact and matches the pairwise count exactly.
  std::vector<double> rank(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = static_cast<double>(i + j + 2) / 2.0;  // 1-based
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
    i = j + 1;
  }
  double rank_sum_pos = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (labels[k] != 0) rank_sum_pos += rank[k];
  }
  const double np = static_cast<double>(n_pos);
  const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

namespace {

// KL(Bern(a) || Bern(b)) in bits with the 0*log0 = 0 convention.
double bernoulli_kl(double a, double b) {
  double kl = 0.0;
  if (a > 0.0) kl += a * std::log2(a / b);
  if (a < 1.0) kl += (1.0 - a) * std::log2((1.0 - a) / (1.0 - b));
  return kl;
}

}  // namespace

double js_distance_bernoulli(double p, double q) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    throw ContractError("js_distance_bernoulli: probabilities must lie in [0,1]");
  }
  const double mid = 0.5 * (p + q);
  double jsd = 0.0;
  if (p != q) jsd = 0.5 * bernoulli_kl(p, mid) + 0.5 * bernoulli_kl(q, mid);
  if (jsd < 0.0) jsd = 0.0;  // guard against rounding
  return std::sqrt(jsd);
}

namespace {

double mean_abs_error(std::span<const int> pred, std::span<const int> y,
                      const char* what) {
  if (pred.size() != y.size()) {
    throw ContractError(std::string(what) + ": prediction/label lengths differ");
  }
  if (pred.empty()) throw ContractError(std::string(what) + ": empty inputs");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) sum += std::abs(pred[i] - y[i]);
  return sum / static_cast<double>(pred.size());
}

double positive_rate(std::span<const int> v) {
  double s = 0.0;
  for (int x : v) s += (x != 0);
  return s / static_cast<double>(v.size());
}

}  // namespace

ErrorReport theorem1_check(std::span<const int> pred_s, std::span<const int> y_s,
                           std::span<const int> pred_t, std::span<const int> y_t,
                           double tol) {
  ErrorReport report;
  report.eps_s = mean_abs_error(pred_s, y_s, "theorem1_check (source)");
  report.eps_t = mean_abs_error(pred_t, y_t, "theorem1_check (target)");
  report.d_js_labels = js_distance_bernoulli(positive_rate(y_s), positive_rate(y_t));
  report.lhs = report.eps_s + report.eps_t;
  report.rhs = 0.5 * report.d_js_labels * report.d_js_labels;
  report.holds = report.lhs >= report.rhs - tol;
  return report;
}

LemmaReport lemma_jsd_check(std::span<const int> pred, std::span<const int> y) {
  LemmaReport report;
  const double eps = mean_abs_error(pred, y, "lemma_jsd_check");
  report.d_js = js_distance_bernoulli(positive_rate(y), positive_rate(pred));
  report.sqrt_eps = std::sqrt(eps);
  report.holds = report.d_js <= report.sqrt_eps + 1e-12;
  return report;
}

std::vector<int> apply_threshold(std::span<const double> scores, ThresholdRule rule) {
  std::vector<int> out(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) out[i] = rule(scores[i]);
  return out;
}

std::vector<TheoryRow> theorem_threshold_sweep(std::span<const double> scores_s,
                                               std::span<const int> y_s,
                                               std::span<const double> scores_t,
                                               std::span<const int> y_t) {
  std::set<double> thresholds(scores_s.begin(), scores_s.end());
  thresholds.insert(scores_t.begin(), scores_t.end());
  std::vector<TheoryRow> rows;
  rows.reserve(thresholds.size());
  for (double thr : thresholds) {
    const ThresholdRule rule{thr};
    TheoryRow row;
    row.threshold = thr;
    const std::vector<int> pred_s = apply_threshold(scores_s, rule);
    const std::vector<int> pred_t = apply_threshold(scores_t, rule);
    row.report = theorem1_check(pred_s, y_s, pred_t, y_t);
    rows.push_back(row);
  }
  return rows;
}

void write_theory_report(const std::string& path, std::span<const TheoryRow> rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << "threshold,eps_s,eps_t,lhs,rhs,holds\n";
  for (const TheoryRow& row : rows) {
    out << format_double(row.threshold) << ',' << format_double(row.report.eps_s) << ','
        << format_double(row.report.eps_t) << ',' << format_double(row.report.lhs)
        << ',' << format_double(row.report.rhs) << ',' << (row.report.holds ? 1 : 0)
        << '\n';
  }
}

EigenDecomposition jacobi_eigen_symmetric(Matrix a, int max_sweeps) {
  if (a.rows() != a.cols()) {
    throw ShapeError("jacobi_eigen_symmetric: matrix must be square, got " +
                     shape_string(a));
  }
  const std::size_t d = a.rows();
  Matrix v = identity(d);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < d; ++p)
      for (std::size_t q = p + 1; q < d; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-24) break;

    for (std::size_t p = 0; p < d; ++p) {
      for (std::size_t q = p + 1; q < d; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < d; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < d; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x) > a(y, y); });

  EigenDecomposition result;
  result.values.resize(d);
  result.vectors = Matrix(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    result.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < d; ++i) result.vectors(i, j) = v(i, order[j]);
  }
  return result;
}

Pca2dResult pca_2d_full(const Matrix& points) {
  if (points.rows() < 2 || points.cols() < 2) {
    throw ContractError("pca_2d: need at least 2 points and 2 dimensions, got " +
                        shape_string(points));
  }
  const std::size_t n = points.rows(), d = points.cols();

  Matrix centered = points;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += points(i, j);
    mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) centered(i, j) -= mean;
  }

  Matrix cov = matmul_tn(centered, centered);
  scale_inplace(cov, 1.0 / static_cast<double>(n - 1));

  double trace = 0.0;
  for (std::size_t j = 0; j < d; ++j) trace += cov(j, j);
  Pca2dResult result;
  result.components = Matrix(d, 2);
  result.component_variance[0] = 0.0;
  result.component_variance[1] = 0.0;
  if (trace <= 0.0) {
    std::cerr << "pca_2d: rank-0 input, returning zero projection\n";
    result.projection = Matrix(n, 2);
    return result;
  }

  EigenDecomposition eig = jacobi_eigen_symmetric(cov);
  for (int comp = 0; comp < 2; ++comp) {
    // Sign convention: largest-magnitude loading positive.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < d; ++i) {
      if (std::abs(eig.vectors(i, comp)) > std::abs(eig.vectors(arg, comp))) arg = i;
    }
    const double flip = eig.vectors(arg, comp) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < d; ++i)
      result.components(i, comp) = flip * eig.vectors(i, comp);
    result.component_variance[comp] = eig.values[comp];
  }
  result.projection = matmul(centered, result.components);
  return result;
}

Matrix pca_2d(const Matrix& points) { return pca_2d_full(points).projection; }

}  // namespace irad

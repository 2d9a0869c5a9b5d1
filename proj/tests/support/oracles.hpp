// Independent reference implementations used to cross-check the library.
// Everything here is deliberately written the slow, obvious way and must not
// call the code paths it verifies.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "irad/matrix.hpp"

namespace oracle {

// Naive triple-loop product, k innermost in ascending order.
inline irad::Matrix matmul(const irad::Matrix& a, const irad::Matrix& b) {
  irad::Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

// O(n^2) pairwise AUROC: wins + half ties over positive/negative pairs.
inline double pairwise_auroc(const std::vector<double>& scores,
                             const std::vector<int>& labels) {
  double wins2 = 0.0;  // 2*wins + ties, an exact integer
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] == 0) continue;
    ++n_pos;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (labels[j] != 0) continue;
      if (scores[i] > scores[j]) wins2 += 2.0;
      else if (scores[i] == scores[j]) wins2 += 1.0;
    }
  }
  for (int y : labels) n_neg += (y == 0);
  return (wins2 / 2.0) / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

// Pairwise-cosine aggregate behind the dissimilarity/similarity losses.
inline double cosine_gram_frobenius(const irad::Matrix& a, const irad::Matrix& b) {
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double na = 0.0;
    for (std::size_t k = 0; k < a.cols(); ++k) na += a(i, k) * a(i, k);
    na = std::sqrt(na);
    for (std::size_t j = 0; j < b.rows(); ++j) {
      double nb = 0.0, dot = 0.0;
      for (std::size_t k = 0; k < b.cols(); ++k) {
        nb += b(j, k) * b(j, k);
        dot += a(i, k) * b(j, k);
      }
      nb = std::sqrt(nb);
      const double c = (na > 0.0 && nb > 0.0) ? dot / (na * nb) : 0.0;
      sum_sq += c * c;
    }
  }
  return std::sqrt(sum_sq);
}

// Scalar-loop adversarial losses, three fake streams.
struct AdvOracle {
  double v_d;
  double v_g;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline AdvOracle adv_vanilla(const std::vector<double>& real,
                             const std::vector<std::vector<double>>& fakes) {
  double v_d = 0.0;
  for (double r : real) v_d += -std::log(sigmoid(r));
  v_d /= static_cast<double>(real.size());
  double fake_d = 0.0, v_g = 0.0;
  for (const auto& stream : fakes) {
    double d_term = 0.0, g_term = 0.0;
    for (double f : stream) {
      d_term += -std::log(1.0 - sigmoid(f));
      g_term += -std::log(sigmoid(f));
    }
    fake_d += d_term / static_cast<double>(stream.size());
    v_g += g_term / static_cast<double>(stream.size());
  }
  const double k = static_cast<double>(fakes.size());
  return {v_d + fake_d / k, v_g / k};
}

inline AdvOracle adv_least_squares(const std::vector<double>& real,
                                   const std::vector<std::vector<double>>& fakes) {
  double v_d = 0.0;
  for (double r : real) v_d += (r - 1.0) * (r - 1.0);
  v_d /= static_cast<double>(real.size());
  double fake_d = 0.0, v_g = 0.0;
  for (const auto& stream : fakes) {
    double d_term = 0.0, g_term = 0.0;
    for (double f : stream) {
      d_term += f * f;
      g_term += (f - 1.0) * (f - 1.0);
    }
    fake_d += d_term / static_cast<double>(stream.size());
    v_g += g_term / static_cast<double>(stream.size());
  }
  const double k = static_cast<double>(fakes.size());
  return {v_d + fake_d / k, v_g / k};
}

// Row-loop mean Euclidean distance.
inline double mean_row_distance(const irad::Matrix& x, const irad::Matrix& y) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    double n2 = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double d = x(i, j) - y(i, j);
      n2 += d * d;
    }
    sum += std::sqrt(n2);
  }
  return sum / static_cast<double>(x.rows());
}

// Base-2 Jensen-Shannon distance between Bernoulli distributions, written
// directly from the divergence definition.
inline double jsd_bernoulli_distance(double p, double q) {
  const auto term = [](double a, double m) {
    return a > 0.0 ? a * std::log2(a / m) : 0.0;
  };
  const double m1 = 0.5 * (p + q);
  const double m0 = 0.5 * ((1.0 - p) + (1.0 - q));
  const double kl_p = term(p, m1) + term(1.0 - p, m0);
  const double kl_q = term(q, m1) + term(1.0 - q, m0);
  const double jsd = 0.5 * kl_p + 0.5 * kl_q;
  return std::sqrt(std::max(0.0, jsd));
}

// Top eigenvalues of a symmetric PSD matrix by power iteration + deflation.
inline std::vector<double> top_eigenvalues_power(irad::Matrix a, int count,
                                                 int iters = 20000) {
  const std::size_t d = a.rows();
  std::vector<double> values;
  for (int c = 0; c < count; ++c) {
    std::vector<double> v(d, 0.0);
    for (std::size_t i = 0; i < d; ++i) v[i] = 1.0 / std::sqrt(static_cast<double>(d) + i);
    double lambda = 0.0;
    for (int it = 0; it < iters; ++it) {
      std::vector<double> w(d, 0.0);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) w[i] += a(i, j) * v[j];
      double norm = 0.0;
      for (double x : w) norm += x * x;
      norm = std::sqrt(norm);
      if (norm == 0.0) break;
      for (std::size_t i = 0; i < d; ++i) v[i] = w[i] / norm;
      lambda = 0.0;
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) lambda += v[i] * a(i, j) * v[j];
    }
    values.push_back(lambda);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) a(i, j) -= lambda * v[i] * v[j];
  }
  return values;
}

}  // namespace oracle

#include "irad/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "irad/errors.hpp"

namespace irad {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != c) {
      throw ShapeError("from_rows: ragged row " + std::to_string(i) + " has " +
                       std::to_string(row.size()) + " entries, expected " +
                       std::to_string(c));
    }
    std::size_t j = 0;
    for (double v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

std::string shape_string(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape " + shape_string(a) +
                     " does not match " + shape_string(b));
  }
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: lhs " + shape_string(a) + " incompatible with rhs " +
                     shape_string(b));
  }
  Matrix c(a.rows(), b.cols());
  const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
  for (std::size_t i = 0; i < n; ++i) {
    double* ci = c.data() + i * m;
    for (std::size_t p = 0; p < k; ++p) {
      const double aip = a(i, p);
      const double* bp = b.data() + p * m;
      for (std::size_t j = 0; j < m; ++j) ci[j] += aip * bp[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt: lhs " + shape_string(a) + " incompatible with rhs " +
                     shape_string(b) + " (column counts must match)");
  }
  Matrix c(a.rows(), b.rows());
  const std::size_t d = a.cols();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double* ai = a.data() + i * d;
    for (std::size_t j = 0; j < b.rows(); ++j) {
      const double* bj = b.data() + j * d;
      double s = 0.0;
      for (std::size_t p = 0; p < d; ++p) s += ai[p] * bj[p];
      c(i, j) = s;
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("matmul_tn: lhs " + shape_string(a) + " incompatible with rhs " +
                     shape_string(b) + " (row counts must match)");
  }
  Matrix c(a.cols(), b.cols());
  const std::size_t n = a.rows(), ka = a.cols(), kb = b.cols();
  for (std::size_t p = 0; p < n; ++p) {
    const double* ap = a.data() + p * ka;
    const double* bp = b.data() + p * kb;
    for (std::size_t i = 0; i < ka; ++i) {
      double* ci = c.data() + i * kb;
      const double aip = ap[i];
      for (std::size_t j = 0; j < kb; ++j) ci[j] += aip * bp[j];
    }
  }
  return c;
}

Matrix transpose(const Matrix& m) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) t(j, i) = m(i, j);
  return t;
}

Matrix identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "add");
  Matrix c = a;
  add_inplace(c, b);
  return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "sub");
  Matrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

void add_inplace(Matrix& dst, const Matrix& src) {
  require_same_shape(dst, src, "add_inplace");
  for (std::size_t i = 0; i < dst.size(); ++i) dst.data()[i] += src.data()[i];
}

void scale_inplace(Matrix& m, double factor) {
  for (std::size_t i = 0; i < m.size(); ++i) m.data()[i] *= factor;
}

void axpy_inplace(Matrix& dst, double factor, const Matrix& src) {
  require_same_shape(dst, src, "axpy_inplace");
  for (std::size_t i = 0; i < dst.size(); ++i) dst.data()[i] += factor * src.data()[i];
}

Matrix hcat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("hcat: row counts differ, " + shape_string(a) + " vs " +
                     shape_string(b));
  }
  Matrix c(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.data() + i * a.cols(), a.data() + (i + 1) * a.cols(),
              c.data() + i * c.cols());
    std::copy(b.data() + i * b.cols(), b.data() + (i + 1) * b.cols(),
              c.data() + i * c.cols() + a.cols());
  }
  return c;
}

Matrix vcat(const Matrix& a, const Matrix& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.cols() != b.cols()) {
    throw ShapeError("vcat: column counts differ, " + shape_string(a) + " vs " +
                     shape_string(b));
  }
  Matrix c(a.rows() + b.rows(), a.cols());
  std::copy(a.data(), a.data() + a.size(), c.data());
  std::copy(b.data(), b.data() + b.size(), c.data() + a.size());
  return c;
}

Matrix row_normalized(const Matrix& m) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double n2 = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) n2 += m(i, j) * m(i, j);
    const double n = std::sqrt(n2);
    if (n > 0.0) {
      for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j) / n;
    }
  }
  return out;
}

bool all_finite(const Matrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!std::isfinite(m.data()[i])) return false;
  return true;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    d = std::max(d, std::abs(a.data()[i] - b.data()[i]));
  return d;
}

}  // namespace irad

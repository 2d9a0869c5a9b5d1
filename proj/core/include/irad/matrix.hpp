#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace irad {

// Dense row-major matrix of doubles. The universal value carrier: batches,
// encodings, weights, gradients.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, double fill)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

std::string shape_string(const Matrix& m);

// c = a * b; a.cols must equal b.rows.
Matrix matmul(const Matrix& a, const Matrix& b);
// c = a * b^T; a.cols must equal b.cols.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// c = a^T * b; a.rows must equal b.rows.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& m);
Matrix identity(std::size_t n);

Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
void add_inplace(Matrix& dst, const Matrix& src);
void scale_inplace(Matrix& m, double factor);
// dst += factor * src
void axpy_inplace(Matrix& dst, double factor, const Matrix& src);

// Appends the columns of b to the right of a; equal row counts required.
Matrix hcat(const Matrix& a, const Matrix& b);
// Stacks the rows of b below a; equal column counts required.
Matrix vcat(const Matrix& a, const Matrix& b);

// Each row scaled to unit L2 norm; zero rows pass through unchanged.
Matrix row_normalized(const Matrix& m);

bool all_finite(const Matrix& m);
double max_abs_diff(const Matrix& a, const Matrix& b);

}  // namespace irad

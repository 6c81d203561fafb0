#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace adagcn {

// Row-major dense matrix of doubles. Houses feature matrices, propagated
// features, logits and parameter blocks.
struct DenseMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  std::span<double> row_span(std::size_t i) { return {row(i), cols}; }
  std::span<const double> row_span(std::size_t i) const { return {row(i), cols}; }

  std::size_t size() const { return data.size(); }
  void fill(double v) { data.assign(data.size(), v); }

  bool same_shape(const DenseMatrix& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

namespace ops {

// C = A * B. Throws InputError on inner-dimension mismatch.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// C = A^T * B (A is m x k, B is m x n, C is k x n).
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);

// C = A * B^T (A is m x k, B is n x k, C is m x n). Implemented by
// transposing B first; accumulation order matches matmul.
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

void add_in_place(DenseMatrix& y, const DenseMatrix& x);  // y += x
void scale_in_place(DenseMatrix& y, double a);            // y *= a

// M(i, j) += bias[j] for every row.
void add_bias_rows(DenseMatrix& m, std::span<const double> bias);

DenseMatrix relu(const DenseMatrix& a);
// grad(i, j) = 0 wherever pre(i, j) <= 0.
void relu_backward_in_place(DenseMatrix& grad, const DenseMatrix& pre);

// Column sums, length a.cols.
std::vector<double> colsum(const DenseMatrix& a);

// Rows of m indexed by idx, in idx order.
DenseMatrix select_rows(const DenseMatrix& m, std::span<const std::uint32_t> idx);

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);
double frobenius_norm(const DenseMatrix& a);

}  // namespace ops

}  // namespace adagcn

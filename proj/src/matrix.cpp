#include "adagcn/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "adagcn/errors.hpp"
#include "adagcn/kernels.hpp"
#include "adagcn/parallel.hpp"

namespace adagcn::ops {

namespace {

// Work below this many output elements is not worth a thread launch.
constexpr std::size_t kParallelGrain = 1 << 15;

std::size_t rows_per_chunk(std::size_t total_work, std::size_t rows) {
  if (rows == 0) return 1;
  std::size_t per_row = total_work / rows;
  if (per_row == 0) per_row = 1;
  return kParallelGrain / per_row + 1;
}

}  // namespace

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows) {
    throw InputError("matmul: inner dimensions differ (" +
                     std::to_string(a.cols) + " vs " + std::to_string(b.rows) +
                     ")");
  }
  DenseMatrix c(a.rows, b.cols, 0.0);
  std::size_t work = a.rows * a.cols * b.cols;
  parallel_for(a.rows, rows_per_chunk(work, a.rows),
               [&](std::size_t r0, std::size_t r1) {
                 for (std::size_t i = r0; i < r1; ++i) {
                   double* ci = c.row(i);
                   const double* ai = a.row(i);
                   for (std::size_t k = 0; k < a.cols; ++k) {
                     kernels::axpy(ci, ai[k], b.row(k), b.cols);
                   }
                 }
               });
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows) {
    throw InputError("matmul_tn: row counts differ");
  }
  DenseMatrix c(a.cols, b.cols, 0.0);
  // Each output row of C accumulates over samples i in ascending order;
  // parallel over output rows keeps that order per element.
  std::size_t work = a.rows * a.cols * b.cols;
  parallel_for(a.cols, rows_per_chunk(work, a.cols),
               [&](std::size_t c0, std::size_t c1) {
                 for (std::size_t i = 0; i < a.rows; ++i) {
                   const double* ai = a.row(i);
                   const double* bi = b.row(i);
                   for (std::size_t k = c0; k < c1; ++k) {
                     kernels::axpy(c.row(k), ai[k], bi, b.cols);
                   }
                 }
               });
  return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
  return matmul(a, transpose(b));
}

DenseMatrix transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < a.cols; ++j) {
      t(j, i) = a(i, j);
    }
  }
  return t;
}

void add_in_place(DenseMatrix& y, const DenseMatrix& x) {
  if (!y.same_shape(x)) throw InputError("add_in_place: shape mismatch");
  kernels::add(y.data.data(), x.data.data(), y.size());
}

void scale_in_place(DenseMatrix& y, double a) {
  kernels::scale(y.data.data(), a, y.size());
}

void add_bias_rows(DenseMatrix& m, std::span<const double> bias) {
  if (bias.size() != m.cols) throw InputError("add_bias_rows: length mismatch");
  for (std::size_t i = 0; i < m.rows; ++i) {
    kernels::add(m.row(i), bias.data(), m.cols);
  }
}

DenseMatrix relu(const DenseMatrix& a) {
  DenseMatrix y(a.rows, a.cols);
  kernels::relu(y.data.data(), a.data.data(), a.size());
  return y;
}

void relu_backward_in_place(DenseMatrix& grad, const DenseMatrix& pre) {
  if (!grad.same_shape(pre)) {
    throw InputError("relu_backward_in_place: shape mismatch");
  }
  kernels::relu_mask(grad.data.data(), pre.data.data(), grad.size());
}

std::vector<double> colsum(const DenseMatrix& a) {
  std::vector<double> s(a.cols, 0.0);
  for (std::size_t i = 0; i < a.rows; ++i) {
    kernels::add(s.data(), a.row(i), a.cols);
  }
  return s;
}

DenseMatrix select_rows(const DenseMatrix& m,
                        std::span<const std::uint32_t> idx) {
  DenseMatrix out(idx.size(), m.cols);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= m.rows) throw InputError("select_rows: index out of range");
    std::copy(m.row(idx[i]), m.row(idx[i]) + m.cols, out.row(i));
  }
  return out;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.same_shape(b)) throw InputError("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::fabs(a.data[i] - b.data[i]));
  }
  return m;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.data) s += v * v;
  return std::sqrt(s);
}

}  // namespace adagcn::ops

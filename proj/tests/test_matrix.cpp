#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "adagcn/matrix.hpp"
#include "adagcn/rng.hpp"

using adagcn::DenseMatrix;
using adagcn::Rng;

namespace {

DenseMatrix random_matrix(std::size_t r, std::size_t c, Rng& rng) {
  DenseMatrix m(r, c);
  for (auto& v : m.data) v = rng.normal();
  return m;
}

// Naive triple-loop reference, independent of the kernel-backed paths.
DenseMatrix naive_matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < b.cols; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

DenseMatrix naive_transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols, a.rows);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j) t(j, i) = a(i, j);
  return t;
}

}  // namespace

TEST_CASE("matmul matches a hand-computed 2x3 * 3x2 product") {
  DenseMatrix a(2, 3);
  a.data = {1, 2, 3, 4, 5, 6};
  DenseMatrix b(3, 2);
  b.data = {7, 8, 9, 10, 11, 12};
  DenseMatrix c = adagcn::ops::matmul(a, b);
  REQUIRE(c.rows == 2);
  REQUIRE(c.cols == 2);
  CHECK(c(0, 0) == 58);
  CHECK(c(0, 1) == 64);
  CHECK(c(1, 0) == 139);
  CHECK(c(1, 1) == 154);
}

TEST_CASE("matmul variants agree with the naive reference") {
  Rng rng(5);
  for (auto [m, k, n] : std::vector<std::array<std::size_t, 3>>{
           {1, 1, 1}, {2, 3, 4}, {5, 7, 3}, {17, 13, 11}, {33, 8, 40}}) {
    DenseMatrix a = random_matrix(m, k, rng);
    DenseMatrix b = random_matrix(k, n, rng);
    DenseMatrix at = naive_transpose(a);
    DenseMatrix bt = naive_transpose(b);

    CHECK(adagcn::ops::max_abs_diff(adagcn::ops::matmul(a, b), naive_matmul(a, b)) <
          1e-12);
    // matmul_tn(a, b) = a^T b ; matmul_nt(a, b) = a b^T.
    CHECK(adagcn::ops::max_abs_diff(adagcn::ops::matmul_tn(at, b),
                               naive_matmul(a, b)) < 1e-12);
    CHECK(adagcn::ops::max_abs_diff(adagcn::ops::matmul_nt(a, bt),
                               naive_matmul(a, b)) < 1e-12);
  }
}

TEST_CASE("transpose matches the naive reference") {
  Rng rng(9);
  DenseMatrix a = random_matrix(6, 11, rng);
  DenseMatrix t = adagcn::ops::transpose(a);
  REQUIRE(t.rows == 11);
  REQUIRE(t.cols == 6);
  CHECK(adagcn::ops::max_abs_diff(t, naive_transpose(a)) == 0.0);
}

TEST_CASE("add_in_place and scale_in_place") {
  DenseMatrix a(2, 2);
  a.data = {1, 2, 3, 4};
  DenseMatrix b(2, 2);
  b.data = {10, 20, 30, 40};
  adagcn::ops::add_in_place(a, b);
  CHECK(a.data == std::vector<double>{11, 22, 33, 44});
  adagcn::ops::scale_in_place(a, 0.5);
  CHECK(a.data == std::vector<double>{5.5, 11, 16.5, 22});
}

TEST_CASE("add_bias_rows adds the bias to every row") {
  DenseMatrix m(3, 2, 1.0);
  std::vector<double> bias = {0.5, -1.0};
  adagcn::ops::add_bias_rows(m, bias);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(m(i, 0) == 1.5);
    CHECK(m(i, 1) == 0.0);
  }
}

TEST_CASE("relu matches the elementwise ternary") {
  Rng rng(3);
  DenseMatrix a = random_matrix(7, 9, rng);
  a(0, 0) = 0.0;
  a(1, 1) = -0.0;
  DenseMatrix r = adagcn::ops::relu(a);
  for (std::size_t i = 0; i < a.rows; ++i)
    for (std::size_t j = 0; j < a.cols; ++j)
      CHECK(r(i, j) == (a(i, j) > 0.0 ? a(i, j) : 0.0));
}

TEST_CASE("relu_backward_in_place zeroes grad where pre <= 0") {
  DenseMatrix grad(1, 4);
  grad.data = {1, 2, 3, 4};
  DenseMatrix pre(1, 4);
  pre.data = {1.0, -1.0, 0.0, 0.5};
  adagcn::ops::relu_backward_in_place(grad, pre);
  CHECK(grad.data == std::vector<double>{1, 0, 0, 4});
}

TEST_CASE("colsum") {
  DenseMatrix a(3, 2);
  a.data = {1, 10, 2, 20, 3, 30};
  auto s = adagcn::ops::colsum(a);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == 6);
  CHECK(s[1] == 60);
}

TEST_CASE("select_rows gathers rows in index order") {
  DenseMatrix a(4, 2);
  a.data = {0, 1, 10, 11, 20, 21, 30, 31};
  std::vector<std::uint32_t> idx = {3, 0, 3};
  DenseMatrix s = adagcn::ops::select_rows(a, idx);
  REQUIRE(s.rows == 3);
  CHECK(s.data == std::vector<double>{30, 31, 0, 1, 30, 31});
}

TEST_CASE("max_abs_diff and frobenius_norm") {
  DenseMatrix a(2, 2);
  a.data = {1, 2, 3, 4};
  DenseMatrix b(2, 2);
  b.data = {1, 2.5, 3, 3};
  CHECK(adagcn::ops::max_abs_diff(a, b) == doctest::Approx(1.0));
  CHECK(adagcn::ops::frobenius_norm(a) ==
        doctest::Approx(std::sqrt(1.0 + 4.0 + 9.0 + 16.0)));
  CHECK(adagcn::ops::max_abs_diff(a, a) == 0.0);
}

TEST_CASE("matmul is deterministic across repeated calls") {
  Rng rng(17);
  DenseMatrix a = random_matrix(40, 30, rng);
  DenseMatrix b = random_matrix(30, 20, rng);
  DenseMatrix c1 = adagcn::ops::matmul(a, b);
  DenseMatrix c2 = adagcn::ops::matmul(a, b);
  CHECK(adagcn::ops::max_abs_diff(c1, c2) == 0.0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "adagcn/errors.hpp"
#include "adagcn/graph.hpp"
#include "adagcn/matrix.hpp"
#include "adagcn/rng.hpp"

using adagcn::DenseMatrix;
using adagcn::EdgeList;
using adagcn::Rng;
using adagcn::SparseAdjacency;

namespace {

DenseMatrix to_dense(const SparseAdjacency& a) {
  DenseMatrix d(a.n, a.n);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e)
      d(i, a.col_idx[e]) = a.values[e];
  return d;
}

DenseMatrix random_features(std::size_t n, std::size_t c, Rng& rng) {
  DenseMatrix x(n, c);
  for (auto& v : x.data) v = rng.normal();
  return x;
}

}  // namespace

TEST_CASE("single edge builds a symmetric 2x2 adjacency") {
  SparseAdjacency a = adagcn::build_from_edge_list(2, {{0, 1}});
  REQUIRE(a.n == 2);
  REQUIRE(a.nnz() == 2);
  CHECK(a.value_at(0, 1) == 1.0);
  CHECK(a.value_at(1, 0) == 1.0);
  CHECK(a.value_at(0, 0) == 0.0);
  CHECK(a.value_at(1, 1) == 0.0);
}

TEST_CASE("empty graph with one node") {
  SparseAdjacency a = adagcn::build_from_edge_list(1, {});
  REQUIRE(a.n == 1);
  CHECK(a.nnz() == 0);
  REQUIRE(a.row_ptr.size() == 2);
  CHECK(a.row_ptr[0] == 0);
  CHECK(a.row_ptr[1] == 0);
}

TEST_CASE("duplicates, reversed pairs, and self-loops collapse") {
  EdgeList edges = {{0, 1}, {1, 0}, {0, 1}, {1, 1}};
  SparseAdjacency a = adagcn::build_from_edge_list(2, edges);
  CHECK(a.nnz() == 2);  // just (0,1) and (1,0); the self-loop is dropped
  CHECK(a.value_at(0, 1) == 1.0);
  CHECK(a.value_at(1, 1) == 0.0);
}

TEST_CASE("column indices are strictly increasing within each row") {
  EdgeList edges = {{3, 0}, {3, 2}, {3, 1}, {0, 2}};
  SparseAdjacency a = adagcn::build_from_edge_list(4, edges);
  for (std::size_t i = 0; i < a.n; ++i)
    for (std::size_t e = a.row_ptr[i] + 1; e < a.row_ptr[i + 1]; ++e)
      CHECK(a.col_idx[e - 1] < a.col_idx[e]);
}

TEST_CASE("out-of-range endpoint is rejected") {
  CHECK_THROWS_AS(adagcn::build_from_edge_list(2, {{0, 2}}),
                  adagcn::InputError);
}

TEST_CASE("normalization of the 3-node path graph") {
  // Path 0-1-2. With self-loops the degrees are 2, 3, 2.
  SparseAdjacency a = adagcn::build_from_edge_list(3, {{0, 1}, {1, 2}});
  SparseAdjacency norm = adagcn::sym_normalize(a);
  CHECK(norm.value_at(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(norm.value_at(0, 1) ==
        doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));
  CHECK(norm.value_at(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(norm.value_at(1, 2) ==
        doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-14));
  CHECK(norm.value_at(2, 2) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(norm.value_at(0, 2) == 0.0);
}

TEST_CASE("normalization of a single edge gives all entries 1/2") {
  SparseAdjacency a = adagcn::build_from_edge_list(2, {{0, 1}});
  SparseAdjacency norm = adagcn::sym_normalize(a);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(norm.value_at(i, j) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("isolated node normalizes to a unit self-loop") {
  SparseAdjacency a = adagcn::build_from_edge_list(3, {{0, 1}});
  SparseAdjacency norm = adagcn::sym_normalize(a);
  CHECK(norm.value_at(2, 2) == doctest::Approx(1.0));
  CHECK(norm.value_at(2, 0) == 0.0);
  CHECK(norm.value_at(2, 1) == 0.0);
}

TEST_CASE("normalized matrix is exactly symmetric") {
  Rng rng(11);
  EdgeList edges;
  const std::size_t n = 30;
  for (int e = 0; e < 80; ++e) {
    auto i = static_cast<std::uint32_t>(rng.below(n));
    auto j = static_cast<std::uint32_t>(rng.below(n));
    edges.emplace_back(i, j);
  }
  SparseAdjacency norm =
      adagcn::sym_normalize(adagcn::build_from_edge_list(n, edges));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t e = norm.row_ptr[i]; e < norm.row_ptr[i + 1]; ++e) {
      std::size_t j = norm.col_idx[e];
      CHECK(norm.value_at(j, i) == norm.values[e]);  // bitwise
    }
}

TEST_CASE("spmm matches the dense product") {
  Rng rng(13);
  EdgeList edges;
  const std::size_t n = 25;
  for (int e = 0; e < 60; ++e)
    edges.emplace_back(static_cast<std::uint32_t>(rng.below(n)),
                       static_cast<std::uint32_t>(rng.below(n)));
  SparseAdjacency norm =
      adagcn::sym_normalize(adagcn::build_from_edge_list(n, edges));
  DenseMatrix x = random_features(n, 7, rng);
  DenseMatrix sparse_result = adagcn::spmm(norm, x);
  DenseMatrix dense_result = adagcn::ops::matmul(to_dense(norm), x);
  CHECK(adagcn::ops::max_abs_diff(sparse_result, dense_result) < 1e-12);
}

TEST_CASE("propagate_chain equals repeated spmm and matches dense powers") {
  Rng rng(19);
  EdgeList edges;
  const std::size_t n = 15;
  for (int e = 0; e < 30; ++e)
    edges.emplace_back(static_cast<std::uint32_t>(rng.below(n)),
                       static_cast<std::uint32_t>(rng.below(n)));
  SparseAdjacency norm =
      adagcn::sym_normalize(adagcn::build_from_edge_list(n, edges));
  DenseMatrix x = random_features(n, 4, rng);

  const int depth = 4;
  auto chain = adagcn::propagate_chain(norm, x, depth);
  REQUIRE(chain.size() == static_cast<std::size_t>(depth) + 1);
  CHECK(adagcn::ops::max_abs_diff(chain[0], x) == 0.0);

  DenseMatrix cur = x;
  DenseMatrix dense = to_dense(norm);
  for (int l = 1; l <= depth; ++l) {
    cur = adagcn::ops::matmul(dense, cur);
    CHECK(adagcn::ops::max_abs_diff(chain[static_cast<std::size_t>(l)], cur) <
          1e-10);
  }
}

TEST_CASE("repeated propagation on a cycle oversmooths to the mean") {
  // 7-cycle: every node has normalized degree 3, so A_hat is doubly
  // stochastic and powers converge to the all-1/7 averaging matrix.
  const std::size_t n = 7;
  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i)
    edges.emplace_back(static_cast<std::uint32_t>(i),
                       static_cast<std::uint32_t>((i + 1) % n));
  SparseAdjacency norm =
      adagcn::sym_normalize(adagcn::build_from_edge_list(n, edges));

  DenseMatrix x(n, 1);
  x(0, 0) = 1.0;  // indicator of node 0
  DenseMatrix z = x;
  for (int step = 0; step < 200; ++step) z = adagcn::spmm(norm, z);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(z(i, 0) == doctest::Approx(1.0 / 7.0).epsilon(1e-9));
}

TEST_CASE("sparse_op_count tracks every spmm") {
  SparseAdjacency norm = adagcn::sym_normalize(
      adagcn::build_from_edge_list(4, {{0, 1}, {1, 2}, {2, 3}}));
  DenseMatrix x(4, 2, 1.0);

  adagcn::reset_sparse_op_count();
  CHECK(adagcn::sparse_op_count() == 0);
  (void)adagcn::spmm(norm, x);
  (void)adagcn::spmm(norm, x);
  (void)adagcn::spmm(norm, x);
  CHECK(adagcn::sparse_op_count() == 3);

  adagcn::reset_sparse_op_count();
  (void)adagcn::propagate_chain(norm, x, 5);
  CHECK(adagcn::sparse_op_count() == 5);
  adagcn::reset_sparse_op_count();
  (void)adagcn::propagate_chain(norm, x, 0);
  CHECK(adagcn::sparse_op_count() == 0);
}

TEST_CASE("edge list file round trip") {
  std::string path = "test_graph_edges.tmp";
  {
    std::ofstream f(path);
    f << "# a comment\n";
    f << "0 1\n";
    f << "\n";
    f << "2 1\n";
  }
  EdgeList edges = adagcn::read_edge_list(path);
  REQUIRE(edges.size() == 2);
  SparseAdjacency a = adagcn::build_from_edge_list(3, edges);
  CHECK(a.value_at(0, 1) == 1.0);
  CHECK(a.value_at(1, 2) == 1.0);

  adagcn::write_edge_list(path, a);
  EdgeList again = adagcn::read_edge_list(path);
  SparseAdjacency b = adagcn::build_from_edge_list(3, again);
  CHECK(b.row_ptr == a.row_ptr);
  CHECK(b.col_idx == a.col_idx);
  CHECK(b.values == a.values);
  std::remove(path.c_str());
}

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "adagcn/matrix.hpp"

namespace adagcn {

// Symmetric graph matrix in canonical CSR form: within each row the column
// indices are strictly increasing, every (i, j) entry has a matching (j, i)
// with the same value, and there are no duplicates. Holds both the raw
// adjacency (unit weights, no self-loops) and its normalized form
// D^{-1/2} (A + I) D^{-1/2}.
struct SparseAdjacency {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;  // length n + 1
  std::vector<std::uint32_t> col_idx;
  std::vector<double> values;

  std::size_t nnz() const { return col_idx.size(); }

  // Stored value at (i, j), 0 if the entry is absent. Linear scan; test use.
  double value_at(std::size_t i, std::size_t j) const;
};

using EdgeList = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// Canonical CSR from a raw edge list: duplicates merged, symmetrized, input
// self-loops dropped (normalization is what adds them back), every kept entry
// has value 1. Throws InputError when an endpoint is >= n.
SparseAdjacency build_from_edge_list(std::size_t n, const EdgeList& edges);

// D^{-1/2} (A + I) D^{-1/2} with D the degree matrix of A + I. Defined for
// every input: isolated nodes end up with a single unit self-loop.
SparseAdjacency sym_normalize(const SparseAdjacency& adj);

// Sparse * dense product. Each output row accumulates its neighbors in
// ascending column order, so results are bit-identical for any thread count.
// Increments the sparse-op counter by one.
DenseMatrix spmm(const SparseAdjacency& adj, const DenseMatrix& x);

// [X, AX, A^2 X, ..., A^L X] via L successive spmm calls.
std::vector<DenseMatrix> propagate_chain(const SparseAdjacency& adj,
                                         const DenseMatrix& x, int depth);

// Process-wide count of sparse matrix products performed. The cost model in
// the benchmark reports this next to wall time.
std::uint64_t sparse_op_count();
void reset_sparse_op_count();

// Edge-list file: one "i j" pair per line, '#' starts a comment line.
EdgeList read_edge_list(const std::string& path);
void write_edge_list(const std::string& path, const SparseAdjacency& adj);

}  // namespace adagcn

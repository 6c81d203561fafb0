#include "adagcn/graph.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <sstream>

#include "adagcn/errors.hpp"
#include "adagcn/kernels.hpp"
#include "adagcn/parallel.hpp"

namespace adagcn {

namespace {

std::atomic<std::uint64_t> g_sparse_ops{0};

}  // namespace

double SparseAdjacency::value_at(std::size_t i, std::size_t j) const {
  for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
    if (col_idx[k] == j) return values[k];
  }
  return 0.0;
}

SparseAdjacency build_from_edge_list(std::size_t n, const EdgeList& edges) {
  std::vector<std::vector<std::uint32_t>> nbrs(n);
  for (const auto& [a, b] : edges) {
    if (a >= n || b >= n) {
      throw InputError("edge (" + std::to_string(a) + ", " + std::to_string(b) +
                       ") out of range for " + std::to_string(n) + " nodes");
    }
    if (a == b) continue;  // self-loops come from normalization only
    nbrs[a].push_back(b);
    nbrs[b].push_back(a);
  }
  SparseAdjacency adj;
  adj.n = n;
  adj.row_ptr.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& row = nbrs[i];
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    adj.row_ptr[i + 1] = adj.row_ptr[i] + row.size();
    adj.col_idx.insert(adj.col_idx.end(), row.begin(), row.end());
  }
  adj.values.assign(adj.col_idx.size(), 1.0);
  return adj;
}

SparseAdjacency sym_normalize(const SparseAdjacency& adj) {
  const std::size_t n = adj.n;
  // Degrees of A + I; the added self-loop keeps every degree >= 1.
  std::vector<double> inv_sqrt_deg(n);
  for (std::size_t i = 0; i < n; ++i) {
    double d = 1.0 + static_cast<double>(adj.row_ptr[i + 1] - adj.row_ptr[i]);
    inv_sqrt_deg[i] = 1.0 / std::sqrt(d);
  }
  SparseAdjacency out;
  out.n = n;
  out.row_ptr.assign(n + 1, 0);
  out.col_idx.reserve(adj.nnz() + n);
  out.values.reserve(adj.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    bool self_done = false;
    for (std::size_t k = adj.row_ptr[i]; k < adj.row_ptr[i + 1]; ++k) {
      std::uint32_t j = adj.col_idx[k];
      if (!self_done && j > i) {
        out.col_idx.push_back(static_cast<std::uint32_t>(i));
        out.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[i]);
        self_done = true;
      }
      out.col_idx.push_back(j);
      out.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[j]);
    }
    if (!self_done) {
      out.col_idx.push_back(static_cast<std::uint32_t>(i));
      out.values.push_back(inv_sqrt_deg[i] * inv_sqrt_deg[i]);
    }
    out.row_ptr[i + 1] = out.col_idx.size();
  }
  return out;
}

DenseMatrix spmm(const SparseAdjacency& adj, const DenseMatrix& x) {
  if (adj.n != x.rows) {
    throw InputError("spmm: adjacency has " + std::to_string(adj.n) +
                     " nodes but features have " + std::to_string(x.rows) +
                     " rows");
  }
  g_sparse_ops.fetch_add(1, std::memory_order_relaxed);
  DenseMatrix y(adj.n, x.cols, 0.0);
  std::size_t grain = adj.n / 64 + 2;  // rows are cheap; coarse chunks
  parallel_for(adj.n, grain, [&](std::size_t r0, std::size_t r1) {
    for (std::size_t i = r0; i < r1; ++i) {
      double* yi = y.row(i);
      for (std::size_t k = adj.row_ptr[i]; k < adj.row_ptr[i + 1]; ++k) {
        kernels::axpy(yi, adj.values[k], x.row(adj.col_idx[k]), x.cols);
      }
    }
  });
  return y;
}

std::vector<DenseMatrix> propagate_chain(const SparseAdjacency& adj,
                                         const DenseMatrix& x, int depth) {
  if (depth < 0) throw InputError("propagate_chain: negative depth");
  std::vector<DenseMatrix> chain;
  chain.reserve(depth + 1);
  chain.push_back(x);
  for (int l = 0; l < depth; ++l) {
    chain.push_back(spmm(adj, chain.back()));
  }
  return chain;
}

std::uint64_t sparse_op_count() {
  return g_sparse_ops.load(std::memory_order_relaxed);
}

void reset_sparse_op_count() {
  g_sparse_ops.store(0, std::memory_order_relaxed);
}

EdgeList read_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge file: " + path);
  EdgeList edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    long long a = -1, b = -1;
    if (!(ss >> a >> b) || a < 0 || b < 0) {
      throw InputError(path + ":" + std::to_string(lineno) +
                       ": expected two non-negative node ids");
    }
    edges.emplace_back(static_cast<std::uint32_t>(a),
                       static_cast<std::uint32_t>(b));
  }
  return edges;
}

void write_edge_list(const std::string& path, const SparseAdjacency& adj) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write edge file: " + path);
  out << "# " << adj.n << " nodes\n";
  for (std::size_t i = 0; i < adj.n; ++i) {
    for (std::size_t k = adj.row_ptr[i]; k < adj.row_ptr[i + 1]; ++k) {
      std::uint32_t j = adj.col_idx[k];
      if (j > i) out << i << " " << j << "\n";  // each undirected edge once
    }
  }
}

}  // namespace adagcn

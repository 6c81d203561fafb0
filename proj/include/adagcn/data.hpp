#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adagcn/graph.hpp"
#include "adagcn/matrix.hpp"

namespace adagcn {

struct Dataset {
  SparseAdjacency adjacency;  // unnormalized, canonical CSR
  DenseMatrix features;       // N x C
  std::vector<int> labels;    // length N, values in [0, num_classes)
  int num_classes = 0;
  std::vector<std::string> label_names;  // dense id -> original label
};

struct SplitSpec {
  int train_per_class = 20;
  int val_size = 100;
  std::uint64_t seed = 0;
};

struct Split {
  std::vector<std::uint32_t> train, val, test;
  double label_rate = 0.0;  // |train| / N
};

struct SbmConfig {
  int blocks = 4;
  int nodes_per_block = 100;
  double p_in = 0.05;
  double p_out = 0.005;
  int feature_dim = 16;
  double feature_signal = 0.5;
  double noise_sd = 1.0;
  std::uint64_t seed = 0;
  // When set, labels follow the parity rule label = (b & 1) ^ (b >> 1 & 1)
  // over the block id b, and only a quarter of the feature dimensions carry
  // each block bit; a linear classifier cannot separate the labels.
  bool xor_labels = false;
};

// Reads `node_id<TAB>label<TAB>f_0<TAB>...` (nodes) plus an edge list file.
// Nodes are indexed in file order; labels map to dense ids in
// first-appearance order.
Dataset load_dataset(const std::string& edge_path,
                     const std::string& node_path);

void save_dataset(const Dataset& ds, const std::string& edge_path,
                  const std::string& node_path);

Dataset generate_sbm(const SbmConfig& cfg);

// Reference generator preset used by the experiment defaults.
SbmConfig reference_sbm(std::uint64_t seed);

// Nonlinear-label variant: xor labels, half the dimensions pure noise.
SbmConfig xor_sbm(std::uint64_t seed);

// train: train_per_class uniform draws per class; val: val_size draws from
// the remainder; test: everything else.
Split make_split(const Dataset& ds, const SplitSpec& spec);

// In-place L1 row normalization (rows with zero mass are left unchanged).
void l1_normalize_rows(DenseMatrix& x);

}  // namespace adagcn

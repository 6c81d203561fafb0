#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "adagcn/boosting.hpp"
#include "adagcn/graph.hpp"
#include "adagcn/matrix.hpp"
#include "adagcn/mlp.hpp"
#include "adagcn/rng.hpp"

namespace adagcn {

// ---------------------------------------------------------------------------
// GCN: Z = A_hat ReLU(... ReLU(A_hat X W0) ...) W_{d-1}, bias-free.
// ---------------------------------------------------------------------------

struct GcnParams {
  std::vector<DenseMatrix> w;  // depth matrices, chainable widths
};

struct GcnCache {
  // Per layer: dropout mask on the layer input, propagated-dropped input
  // M = A_hat (H .* mask), and pre-activation Z = M W.
  std::vector<DenseMatrix> mask, m, z;
  bool valid = false;
};

// Glorot-uniform init for a depth-layer GCN; widths c_in -> hidden^(d-1) -> k
// (depth = 1 gives the single matrix c_in x k).
GcnParams init_gcn_params(std::size_t c_in, std::size_t hidden, std::size_t k,
                          int depth, Rng& rng);

// Inner layers apply ReLU (plus the input itself when residual and widths
// match, added after the activation); the final layer is linear.
DenseMatrix gcn_forward(const GcnParams& params, const SparseAdjacency& a_hat,
                        const DenseMatrix& x, bool residual,
                        double dropout = 0.0, Rng* rng = nullptr,
                        GcnCache* cache = nullptr);

std::vector<DenseMatrix> gcn_backward(const GcnParams& params,
                                      const SparseAdjacency& a_hat,
                                      const GcnCache& cache,
                                      const DenseMatrix& dlogits,
                                      bool residual, double l2_first_layer);

// Full-graph training with unweighted cross-entropy on the train rows.
// Returns the best-validation-epoch parameters.
std::pair<GcnParams, FitReport> train_gcn(
    const SparseAdjacency& a_hat, const DenseMatrix& x,
    std::span<const int> labels, std::span<const std::uint32_t> train_idx,
    std::span<const std::uint32_t> val_idx, const TrainConfig& cfg, int depth,
    bool residual);

// ---------------------------------------------------------------------------
// SGC / AdaSGC: single linear map on propagated features.
// ---------------------------------------------------------------------------

struct LinearParams {
  DenseMatrix w;  // c_in x k
};

// Z = A_hat^l X W (performs l sparse products).
DenseMatrix sgc_forward(const LinearParams& params,
                        const SparseAdjacency& a_hat, const DenseMatrix& x,
                        int l);

// Weighted-softmax-CE fit of the linear map with Adam + early stopping,
// same contract as mlp_fit.
FitReport fit_linear(LinearParams& params, const DenseMatrix& btrain,
                     std::span<const int> ytrain,
                     std::span<const double> weights, const DenseMatrix& bval,
                     std::span<const int> yval, const TrainConfig& cfg);

struct AdaSgcLayer {
  LinearParams params;
  double alpha = 1.0;
};

struct AdaSgcEnsemble {
  BoostVariant variant = BoostVariant::kSammeR;
  int num_classes = 0;
  std::vector<AdaSgcLayer> layers;
  std::vector<LayerStats> stats;
};

// Same driver as run_adagcn with the linear base classifier.
AdaSgcEnsemble run_adasgc(const std::vector<DenseMatrix>& chain,
                          std::span<const int> labels, int num_classes,
                          std::span<const std::uint32_t> train_idx,
                          std::span<const std::uint32_t> val_idx,
                          const AdaGcnConfig& cfg);

DenseMatrix adasgc_scores(const AdaSgcEnsemble& ens,
                          const std::vector<DenseMatrix>& chain);

std::vector<int> adasgc_predict(const AdaSgcEnsemble& ens,
                                const std::vector<DenseMatrix>& chain);

// ---------------------------------------------------------------------------
// PPNP / APPNP propagation.
// ---------------------------------------------------------------------------

// Solves (I - (1-gamma) A_hat) Z = gamma f column-by-column with a dense
// partial-pivot LU. Guarded to n <= 2000.
DenseMatrix ppnp_exact(const DenseMatrix& f, const SparseAdjacency& a_hat,
                       double gamma);

// Power iteration Z^0 = f, Z^{t+1} = (1-gamma) A_hat Z^t + gamma f, returning
// Z^L (L >= 1).
DenseMatrix appnp_iterate(const DenseMatrix& f, const SparseAdjacency& a_hat,
                          double gamma, int steps);

// MLP + APPNP propagation trained end to end (gradients flow through the
// propagation, which is a symmetric linear operator).
std::pair<MlpParams, FitReport> train_appnp(
    const SparseAdjacency& a_hat, const DenseMatrix& x,
    std::span<const int> labels, std::span<const std::uint32_t> train_idx,
    std::span<const std::uint32_t> val_idx, const TrainConfig& cfg,
    double gamma, int power_iters);

// ---------------------------------------------------------------------------
// Proposition verifiers.
// ---------------------------------------------------------------------------

struct Prop1Report {
  double gamma = 0.0;
  double series_err = 0.0;  // Frobenius gap, dense solve vs Neumann series
  std::vector<std::pair<int, double>> appnp_gaps;  // (L, ||APPNP_L - PPNP||_F)
  bool gaps_decreasing = false;
  bool pass = false;
};

// Random connected graph: a random spanning tree plus `extra` random edges.
SparseAdjacency random_connected_graph(std::size_t n, std::size_t extra,
                                       Rng& rng);

// Checks (a) the dense PPNP solve against the Neumann series truncated at
// (1-gamma)^T < 1e-10 (Frobenius tolerance 1e-8) and (b) that the APPNP gap
// shrinks over L in {10, 50, 200}.
Prop1Report verify_prop1(std::size_t n, double gamma, std::uint64_t seed);

struct Prop2Report {
  double max_abs_err = 0.0;
  bool pass = false;
};

// Identity-weight construction: bias-free base classifiers with
// W0 = (|b_l|/alpha_l) I and W1 = sign(b_l) I reproduce
// sum_l b_l ReLU(A_hat^l X) within elementwise 1e-9.
Prop2Report verify_prop2(const SparseAdjacency& a_hat, const DenseMatrix& x,
                         std::span<const double> b,
                         std::span<const double> alphas);

}  // namespace adagcn

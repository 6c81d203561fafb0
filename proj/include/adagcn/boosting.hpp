#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adagcn/graph.hpp"
#include "adagcn/matrix.hpp"
#include "adagcn/mlp.hpp"

namespace adagcn {

enum class BoostVariant { kSamme, kSammeR };

// One boosted layer: the base classifier trained on depth-l features plus its
// vote. For SAMME.R alpha is unused (fixed 1).
struct BoostLayer {
  MlpParams params;
  double alpha = 1.0;
};

struct LayerStats {
  int layer = 0;
  double weighted_err = 0.0;  // SAMME only (0 for SAMME.R)
  double alpha = 1.0;
  int epochs_run = 0;
  double val_acc = 0.0;       // ensemble-so-far validation accuracy
};

struct Ensemble {
  BoostVariant variant = BoostVariant::kSammeR;
  int num_classes = 0;
  std::vector<BoostLayer> layers;
  std::vector<LayerStats> stats;
};

// Weighted error sum_i w_i * 1[pred != truth] / sum_i w_i.
double weighted_error(std::span<const int> pred, std::span<const int> truth,
                      std::span<const double> weights);

// log((1 - err)/err) + log(K - 1), with err clamped to [1e-10, 1 - 1e-10].
double samme_alpha(double err, int num_classes);

// w_i <- w_i * exp(alpha * 1[pred != truth]), then renormalize to sum 1.
void samme_update_weights(std::vector<double>& weights,
                          std::span<const int> pred,
                          std::span<const int> truth, double alpha);

// SAMME.R vote from class probabilities (clamped at 1e-10):
// h_k = (K-1) * (log p_k - mean_k' log p_k'). Rows of the result sum to 0.
DenseMatrix sammer_h(const DenseMatrix& probs);

// Scalar version for a single probability row.
std::vector<double> sammer_h_row(std::span<const double> probs);

// w_i <- w_i * exp(-((K-1)/K) * log p_{i, y_i}), then renormalize to sum 1.
void sammer_update_weights(std::vector<double>& weights,
                           const DenseMatrix& probs,
                           std::span<const int> labels);

// Sum the layer votes (alpha-weighted one-hot for SAMME, h for SAMME.R):
// layer l votes on chain[l]. Argmax per row; ties go to the lowest class.
std::vector<int> ensemble_predict(const Ensemble& ens,
                                  const std::vector<DenseMatrix>& chain);

// Aggregated vote matrix (n x K) without the argmax.
DenseMatrix ensemble_scores(const Ensemble& ens,
                            const std::vector<DenseMatrix>& chain);

struct AdaGcnConfig {
  int depth = 5;  // maximum propagation depth L; the ensemble has L+1 layers
  BoostVariant variant = BoostVariant::kSammeR;
  TrainConfig train;
};

// Train an AdaGCN ensemble. chain must hold depth+1 propagated feature
// matrices (chain[l] = A_hat^l X, from propagate_chain). Layer l = 0..depth
// trains on chain[l]; layer 0 starts from a seeded random init and every
// later layer is warm-started from its predecessor's fitted parameters.
// Boosting weights live on train_idx and start uniform.
Ensemble run_adagcn(const std::vector<DenseMatrix>& chain,
                    std::span<const int> labels, int num_classes,
                    std::span<const std::uint32_t> train_idx,
                    std::span<const std::uint32_t> val_idx,
                    const AdaGcnConfig& cfg);

// 2 (d+1) (L+1) log2((L+1) e): VC-style capacity growth in the depth L for a
// linear aggregation over d-dimensional votes.
double vc_depth_bound(int d, int depth);

}  // namespace adagcn

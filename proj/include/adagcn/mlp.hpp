#pragma once

#include <span>
#include <vector>

#include "adagcn/matrix.hpp"
#include "adagcn/rng.hpp"

namespace adagcn {

// Two-layer MLP: logits = relu(x W0 + b0) W1 + b1.
struct MlpParams {
  DenseMatrix w0;  // in_dim x hidden
  DenseMatrix w1;  // hidden x num_classes
  std::vector<double> b0, b1;
  bool use_bias = true;

  std::size_t in_dim() const { return w0.rows; }
  std::size_t hidden_dim() const { return w0.cols; }
  std::size_t out_dim() const { return w1.cols; }
};

// Intermediates kept by a training forward pass for the backward pass.
struct MlpCache {
  DenseMatrix input_dropped;  // x after input dropout
  DenseMatrix z0;             // pre-activation of the hidden layer
  DenseMatrix hidden_dropped; // relu(z0) after hidden dropout
  DenseMatrix hidden_mask;    // inverted-dropout mask (0 or 1/(1-p))
  DenseMatrix logits;
  bool valid = false;
};

struct MlpGrads {
  DenseMatrix w0, w1;
  std::vector<double> b0, b1;
};

struct TrainConfig {
  std::size_t hidden = 64;
  double lr = 0.01;
  double l2_first_layer = 5e-3;  // lambda on ||W0||_F^2 / 2 in the loss
  double weight_decay = 0.0;     // decoupled decay on W0, W1 only
  double dropout = 0.0;
  int patience = 100;
  int max_epochs = 500;
  std::uint64_t seed = 0;
  bool use_bias = true;
};

struct FitReport {
  int epochs_run = 0;
  int best_epoch = 0;
  double best_val_acc = 0.0;
  double best_val_loss = 0.0;
  double final_train_loss = 0.0;
};

// Glorot-uniform weights (limit sqrt(6/(fan_in+fan_out))), zero biases.
// Draw order: w0 row-major, then w1 row-major.
MlpParams init_params(std::size_t in_dim, std::size_t hidden,
                      std::size_t num_classes, Rng& rng, bool use_bias = true);

// Forward pass. Dropout is applied (to input and hidden activations, inverted
// scaling) only when rng != nullptr and dropout > 0. If cache != nullptr the
// intermediates are recorded for backward().
DenseMatrix mlp_forward(const MlpParams& p, const DenseMatrix& x,
                        double dropout = 0.0, Rng* rng = nullptr,
                        MlpCache* cache = nullptr);

// Row-wise softmax with max subtraction.
DenseMatrix softmax_rows(const DenseMatrix& logits);

// sum_i weights[i] * -log(max(probs[i, labels[i]], 1e-10))
//   + l2/2 * ||w0||_F^2
double weighted_ce_loss(const DenseMatrix& probs, std::span<const int> labels,
                        std::span<const double> weights,
                        const DenseMatrix& w0, double l2);

// Gradients of weighted_ce_loss. dlogits row i is weights[i] * (p_i - y_i).
MlpGrads mlp_backward(const MlpParams& p, const MlpCache& cache,
                      std::span<const int> labels,
                      std::span<const double> weights, double l2);

// Backprop from an externally supplied dL/dlogits (used when further layers
// sit on top of the MLP output). Adds l2 * w0 to the w0 gradient.
MlpGrads mlp_backward_from(const MlpParams& p, const MlpCache& cache,
                           const DenseMatrix& dlogits, double l2);

// Full-batch Adam training starting from the passed-in params. Per-sample
// weights align with btrain rows. Early stopping tracks accuracy on the
// validation rows (ties broken by lower unweighted mean CE loss) and the
// best-epoch parameters are restored before returning. An empty validation
// set disables early stopping and the final-epoch parameters are kept.
FitReport mlp_fit(MlpParams& params, const DenseMatrix& btrain,
                  std::span<const int> ytrain,
                  std::span<const double> weights, const DenseMatrix& bval,
                  std::span<const int> yval, const TrainConfig& cfg);

// argmax per row; ties resolved to the lowest index.
std::vector<int> argmax_rows(const DenseMatrix& m);

double accuracy(std::span<const int> pred, std::span<const int> truth);

}  // namespace adagcn

#include "adagcn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adagcn/errors.hpp"
#include "adagcn/kernels.hpp"
#include "adagcn/optim.hpp"

namespace adagcn {

MlpParams init_params(std::size_t in_dim, std::size_t hidden,
                      std::size_t num_classes, Rng& rng, bool use_bias) {
  MlpParams p;
  p.use_bias = use_bias;
  p.w0 = DenseMatrix(in_dim, hidden);
  p.w1 = DenseMatrix(hidden, num_classes);
  const double lim0 = std::sqrt(6.0 / static_cast<double>(in_dim + hidden));
  const double lim1 =
      std::sqrt(6.0 / static_cast<double>(hidden + num_classes));
  for (double& v : p.w0.data) v = (2.0 * rng.uniform() - 1.0) * lim0;
  for (double& v : p.w1.data) v = (2.0 * rng.uniform() - 1.0) * lim1;
  p.b0.assign(hidden, 0.0);
  p.b1.assign(num_classes, 0.0);
  return p;
}

namespace {

// Inverted dropout applied in place; mask entries are 0 or 1/(1-p).
DenseMatrix apply_dropout(DenseMatrix& x, double p, Rng& rng) {
  DenseMatrix mask(x.rows, x.cols);
  const double scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < x.data.size(); ++i)
    mask.data[i] = rng.uniform() < p ? 0.0 : scale;
  kernels::mul(x.data.data(), mask.data.data(), x.data.size());
  return mask;
}

}  // namespace

DenseMatrix mlp_forward(const MlpParams& p, const DenseMatrix& x,
                        double dropout, Rng* rng, MlpCache* cache) {
  if (x.cols != p.in_dim())
    throw InputError("mlp_forward: input has " + std::to_string(x.cols) +
                     " columns, expected " + std::to_string(p.in_dim()));
  const bool use_dropout = dropout > 0.0 && rng != nullptr;

  DenseMatrix input = x;
  if (use_dropout) {
    DenseMatrix in_mask = apply_dropout(input, dropout, *rng);
    (void)in_mask;  // input mask is not needed by backward
  }

  DenseMatrix z0 = ops::matmul(input, p.w0);
  if (p.use_bias) ops::add_bias_rows(z0, p.b0);
  DenseMatrix hidden = ops::relu(z0);

  DenseMatrix hidden_mask;
  if (use_dropout) hidden_mask = apply_dropout(hidden, dropout, *rng);

  DenseMatrix logits = ops::matmul(hidden, p.w1);
  if (p.use_bias) ops::add_bias_rows(logits, p.b1);

  if (cache) {
    cache->input_dropped = std::move(input);
    cache->z0 = std::move(z0);
    cache->hidden_dropped = std::move(hidden);
    cache->hidden_mask = std::move(hidden_mask);
    cache->logits = logits;
    cache->valid = true;
  }
  return logits;
}

DenseMatrix softmax_rows(const DenseMatrix& logits) {
  DenseMatrix out(logits.rows, logits.cols);
  for (std::size_t i = 0; i < logits.rows; ++i) {
    const double* in = logits.row(i);
    double* o = out.row(i);
    double mx = in[0];
    for (std::size_t j = 1; j < logits.cols; ++j) mx = std::max(mx, in[j]);
    double sum = 0.0;
    for (std::size_t j = 0; j < logits.cols; ++j) {
      o[j] = std::exp(in[j] - mx);
      sum += o[j];
    }
    for (std::size_t j = 0; j < logits.cols; ++j) o[j] /= sum;
  }
  return out;
}

double weighted_ce_loss(const DenseMatrix& probs, std::span<const int> labels,
                        std::span<const double> weights,
                        const DenseMatrix& w0, double l2) {
  if (labels.size() != probs.rows || weights.size() != probs.rows)
    throw InputError("weighted_ce_loss: labels/weights size mismatch");
  double loss = 0.0;
  for (std::size_t i = 0; i < probs.rows; ++i) {
    double p = std::max(probs(i, static_cast<std::size_t>(labels[i])), 1e-10);
    loss -= weights[i] * std::log(p);
  }
  double sq = 0.0;
  for (double v : w0.data) sq += v * v;
  return loss + 0.5 * l2 * sq;
}

MlpGrads mlp_backward_from(const MlpParams& p, const MlpCache& cache,
                           const DenseMatrix& dlogits, double l2) {
  if (!cache.valid) throw InputError("mlp_backward: forward cache is empty");
  MlpGrads g;
  g.w1 = ops::matmul_tn(cache.hidden_dropped, dlogits);
  g.b1 = p.use_bias ? ops::colsum(dlogits) : std::vector<double>(p.out_dim(), 0.0);

  DenseMatrix dh = ops::matmul_nt(dlogits, p.w1);
  if (cache.hidden_mask.data.size() == dh.data.size())
    kernels::mul(dh.data.data(), cache.hidden_mask.data.data(),
                 dh.data.size());
  // Gate by the relu: zero wherever the pre-activation was <= 0.
  kernels::relu_mask(dh.data.data(), cache.z0.data.data(), dh.data.size());

  g.w0 = ops::matmul_tn(cache.input_dropped, dh);
  if (l2 != 0.0)
    kernels::axpy(g.w0.data.data(), l2, p.w0.data.data(), g.w0.data.size());
  g.b0 = p.use_bias ? ops::colsum(dh) : std::vector<double>(p.hidden_dim(), 0.0);
  return g;
}

MlpGrads mlp_backward(const MlpParams& p, const MlpCache& cache,
                      std::span<const int> labels,
                      std::span<const double> weights, double l2) {
  DenseMatrix probs = softmax_rows(cache.logits);
  DenseMatrix dlogits = probs;
  for (std::size_t i = 0; i < dlogits.rows; ++i) {
    double* r = dlogits.row(i);
    r[static_cast<std::size_t>(labels[i])] -= 1.0;
    for (std::size_t j = 0; j < dlogits.cols; ++j) r[j] *= weights[i];
  }
  return mlp_backward_from(p, cache, dlogits, l2);
}

std::vector<int> argmax_rows(const DenseMatrix& m) {
  std::vector<int> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    const double* r = m.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < m.cols; ++j)
      if (r[j] > r[best]) best = j;
    out[i] = static_cast<int>(best);
  }
  return out;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  if (pred.size() != truth.size() || pred.empty())
    throw InputError("accuracy: size mismatch or empty input");
  std::size_t hit = 0;
  for (std::size_t i = 0; i < pred.size(); ++i)
    if (pred[i] == truth[i]) ++hit;
  return static_cast<double>(hit) / static_cast<double>(pred.size());
}

namespace {

double mean_ce(const DenseMatrix& probs, std::span<const int> labels) {
  double s = 0.0;
  for (std::size_t i = 0; i < probs.rows; ++i)
    s -= std::log(
        std::max(probs(i, static_cast<std::size_t>(labels[i])), 1e-10));
  return s / static_cast<double>(probs.rows);
}

}  // namespace

FitReport mlp_fit(MlpParams& params, const DenseMatrix& btrain,
                  std::span<const int> ytrain,
                  std::span<const double> weights, const DenseMatrix& bval,
                  std::span<const int> yval, const TrainConfig& cfg) {
  if (btrain.rows == 0) throw InputError("mlp_fit: empty training set");
  if (weights.size() != btrain.rows || ytrain.size() != btrain.rows)
    throw InputError("mlp_fit: weights/labels must align with training rows");
  if (yval.size() != bval.rows)
    throw InputError("mlp_fit: validation labels/rows mismatch");

  Rng rng(cfg.seed);
  AdamConfig opt_w{.lr = cfg.lr, .weight_decay = cfg.weight_decay};
  AdamConfig opt_b{.lr = cfg.lr, .weight_decay = 0.0};
  AdamState st_w0(params.w0.size()), st_w1(params.w1.size());
  AdamState st_b0(params.b0.size()), st_b1(params.b1.size());

  const bool track_val = bval.rows > 0;
  EarlyStopper stopper(cfg.patience);
  MlpParams best = params;
  FitReport report;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    MlpCache cache;
    mlp_forward(params, btrain, cfg.dropout, &rng, &cache);
    DenseMatrix probs = softmax_rows(cache.logits);
    double train_loss = weighted_ce_loss(probs, ytrain, weights, params.w0,
                                         cfg.l2_first_layer);
    MlpGrads g =
        mlp_backward(params, cache, ytrain, weights, cfg.l2_first_layer);

    adam_step(params.w0.data, g.w0.data, st_w0, opt_w);
    adam_step(params.w1.data, g.w1.data, st_w1, opt_w);
    if (params.use_bias) {
      adam_step(params.b0, g.b0, st_b0, opt_b);
      adam_step(params.b1, g.b1, st_b1, opt_b);
    }

    report.epochs_run = epoch;
    report.final_train_loss = train_loss;
    if (!track_val) continue;

    DenseMatrix val_logits = mlp_forward(params, bval);
    DenseMatrix val_probs = softmax_rows(val_logits);
    double val_acc = accuracy(argmax_rows(val_probs), yval);
    double val_loss = mean_ce(val_probs, yval);
    if (stopper.update(val_acc, val_loss)) {
      best = params;
      report.best_epoch = epoch;
      report.best_val_acc = val_acc;
      report.best_val_loss = val_loss;
    }
    if (stopper.should_stop()) break;
  }

  if (track_val) params = best;
  return report;
}

}  // namespace adagcn

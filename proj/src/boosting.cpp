#include "adagcn/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "adagcn/errors.hpp"

namespace adagcn {

double weighted_error(std::span<const int> pred, std::span<const int> truth,
                      std::span<const double> weights) {
  if (pred.size() != truth.size() || pred.size() != weights.size())
    throw InputError("weighted_error: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    den += weights[i];
    if (pred[i] != truth[i]) num += weights[i];
  }
  if (den <= 0.0) throw InputError("weighted_error: weights sum to zero");
  return num / den;
}

double samme_alpha(double err, int num_classes) {
  if (num_classes < 2) throw InputError("samme_alpha: need at least 2 classes");
  double e = std::clamp(err, 1e-10, 1.0 - 1e-10);
  return std::log((1.0 - e) / e) + std::log(static_cast<double>(num_classes - 1));
}

void samme_update_weights(std::vector<double>& weights,
                          std::span<const int> pred,
                          std::span<const int> truth, double alpha) {
  if (pred.size() != weights.size() || truth.size() != weights.size())
    throw InputError("samme_update_weights: size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (pred[i] != truth[i]) weights[i] *= std::exp(alpha);
    sum += weights[i];
  }
  for (double& w : weights) w /= sum;
}

std::vector<double> sammer_h_row(std::span<const double> probs) {
  const std::size_t k = probs.size();
  std::vector<double> logp(k), h(k);
  double mean = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    logp[j] = std::log(std::max(probs[j], 1e-10));
    mean += logp[j];
  }
  mean /= static_cast<double>(k);
  for (std::size_t j = 0; j < k; ++j)
    h[j] = static_cast<double>(k - 1) * (logp[j] - mean);
  return h;
}

DenseMatrix sammer_h(const DenseMatrix& probs) {
  DenseMatrix h(probs.rows, probs.cols);
  for (std::size_t i = 0; i < probs.rows; ++i) {
    std::vector<double> r =
        sammer_h_row({probs.row(i), probs.cols});
    std::copy(r.begin(), r.end(), h.row(i));
  }
  return h;
}

void sammer_update_weights(std::vector<double>& weights,
                           const DenseMatrix& probs,
                           std::span<const int> labels) {
  if (probs.rows != weights.size() || labels.size() != weights.size())
    throw InputError("sammer_update_weights: size mismatch");
  const double k = static_cast<double>(probs.cols);
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    double p = std::max(probs(i, static_cast<std::size_t>(labels[i])), 1e-10);
    weights[i] *= std::exp(-(k - 1.0) / k * std::log(p));
    sum += weights[i];
  }
  for (double& w : weights) w /= sum;
}

DenseMatrix ensemble_scores(const Ensemble& ens,
                            const std::vector<DenseMatrix>& chain) {
  if (chain.size() < ens.layers.size())
    throw InputError("ensemble_scores: feature chain shorter than ensemble");
  const std::size_t n = chain[0].rows;
  const std::size_t k = static_cast<std::size_t>(ens.num_classes);
  DenseMatrix scores(n, k);
  for (std::size_t l = 0; l < ens.layers.size(); ++l) {
    const BoostLayer& layer = ens.layers[l];
    DenseMatrix logits = mlp_forward(layer.params, chain[l]);
    if (ens.variant == BoostVariant::kSamme) {
      std::vector<int> pred = argmax_rows(logits);
      for (std::size_t i = 0; i < n; ++i)
        scores(i, static_cast<std::size_t>(pred[i])) += layer.alpha;
    } else {
      DenseMatrix h = sammer_h(softmax_rows(logits));
      ops::add_in_place(scores, h);
    }
  }
  return scores;
}

std::vector<int> ensemble_predict(const Ensemble& ens,
                                  const std::vector<DenseMatrix>& chain) {
  return argmax_rows(ensemble_scores(ens, chain));
}

Ensemble run_adagcn(const std::vector<DenseMatrix>& chain,
                    std::span<const int> labels, int num_classes,
                    std::span<const std::uint32_t> train_idx,
                    std::span<const std::uint32_t> val_idx,
                    const AdaGcnConfig& cfg) {
  if (cfg.depth < 0) throw InputError("run_adagcn: depth must be >= 0");
  if (chain.size() != static_cast<std::size_t>(cfg.depth) + 1)
    throw InputError("run_adagcn: expected " + std::to_string(cfg.depth + 1) +
                     " feature matrices, got " + std::to_string(chain.size()));
  if (num_classes < 2) throw InputError("run_adagcn: need at least 2 classes");
  if (train_idx.empty()) throw InputError("run_adagcn: empty training set");

  Ensemble ens;
  ens.variant = cfg.variant;
  ens.num_classes = num_classes;

  std::vector<double> weights(train_idx.size(),
                              1.0 / static_cast<double>(train_idx.size()));
  std::vector<int> ytrain(train_idx.size());
  for (std::size_t i = 0; i < train_idx.size(); ++i)
    ytrain[i] = labels[train_idx[i]];
  std::vector<int> yval(val_idx.size());
  for (std::size_t i = 0; i < val_idx.size(); ++i)
    yval[i] = labels[val_idx[i]];

  const std::size_t k = static_cast<std::size_t>(num_classes);
  DenseMatrix val_scores(val_idx.size(), k);

  Rng master(cfg.train.seed);
  Rng init_rng = master.fork(0);
  MlpParams params = init_params(chain[0].cols, cfg.train.hidden, k, init_rng,
                                 cfg.train.use_bias);

  for (int l = 0; l <= cfg.depth; ++l) {
    const DenseMatrix& feats = chain[static_cast<std::size_t>(l)];
    DenseMatrix bt = ops::select_rows(feats, train_idx);
    DenseMatrix bv = ops::select_rows(feats, val_idx);
    TrainConfig tc = cfg.train;
    tc.seed = master.next_u64();
    // Warm start: params carry over from the previous layer's best epoch.
    FitReport rep = mlp_fit(params, bt, ytrain, weights, bv, yval, tc);

    DenseMatrix probs = softmax_rows(mlp_forward(params, bt));

    LayerStats st;
    st.layer = l;
    st.epochs_run = rep.epochs_run;

    BoostLayer layer;
    layer.params = params;
    if (cfg.variant == BoostVariant::kSamme) {
      std::vector<int> pred = argmax_rows(probs);
      st.weighted_err = weighted_error(pred, ytrain, weights);
      layer.alpha = samme_alpha(st.weighted_err, num_classes);
      samme_update_weights(weights, pred, ytrain, layer.alpha);
    } else {
      layer.alpha = 1.0;
      sammer_update_weights(weights, probs, ytrain);
    }
    st.alpha = layer.alpha;
    ens.layers.push_back(std::move(layer));

    if (!val_idx.empty()) {
      DenseMatrix logits = mlp_forward(ens.layers.back().params, bv);
      if (cfg.variant == BoostVariant::kSamme) {
        std::vector<int> pred = argmax_rows(logits);
        for (std::size_t i = 0; i < pred.size(); ++i)
          val_scores(i, static_cast<std::size_t>(pred[i])) +=
              ens.layers.back().alpha;
      } else {
        ops::add_in_place(val_scores, sammer_h(softmax_rows(logits)));
      }
      st.val_acc = accuracy(argmax_rows(val_scores), yval);
    }
    ens.stats.push_back(st);
  }
  return ens;
}

double vc_depth_bound(int d, int depth) {
  if (d < 1 || depth < 0)
    throw InputError("vc_depth_bound: need d >= 1 and depth >= 0");
  double lp1 = static_cast<double>(depth) + 1.0;
  return 2.0 * (static_cast<double>(d) + 1.0) * lp1 *
         std::log2(lp1 * std::numbers::e);
}

}  // namespace adagcn

#include "adagcn/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adagcn/errors.hpp"
#include "adagcn/kernels.hpp"
#include "adagcn/optim.hpp"

namespace adagcn {

namespace {

int num_classes_of(std::span<const int> labels) {
  int k = 0;
  for (int c : labels) k = std::max(k, c + 1);
  return k;
}

DenseMatrix dropout_in_place(DenseMatrix& x, double p, Rng& rng) {
  DenseMatrix mask(x.rows, x.cols);
  const double scale = 1.0 / (1.0 - p);
  for (std::size_t i = 0; i < x.data.size(); ++i)
    mask.data[i] = rng.uniform() < p ? 0.0 : scale;
  kernels::mul(x.data.data(), mask.data.data(), x.data.size());
  return mask;
}

double subset_loss(const DenseMatrix& probs, std::span<const int> labels,
                   std::span<const std::uint32_t> idx) {
  double s = 0.0;
  for (std::uint32_t i : idx)
    s -= std::log(std::max(probs(i, static_cast<std::size_t>(labels[i])),
                           1e-10));
  return s / static_cast<double>(idx.size());
}

double subset_accuracy(const DenseMatrix& scores, std::span<const int> labels,
                       std::span<const std::uint32_t> idx) {
  std::size_t hit = 0;
  for (std::uint32_t i : idx) {
    const double* r = scores.row(i);
    std::size_t best = 0;
    for (std::size_t j = 1; j < scores.cols; ++j)
      if (r[j] > r[best]) best = j;
    if (static_cast<int>(best) == labels[i]) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(idx.size());
}

// dL/dlogits for mean CE over the rows in idx; zero elsewhere.
DenseMatrix subset_dlogits(const DenseMatrix& probs,
                           std::span<const int> labels,
                           std::span<const std::uint32_t> idx) {
  DenseMatrix d(probs.rows, probs.cols);
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (std::uint32_t i : idx) {
    const double* p = probs.row(i);
    double* r = d.row(i);
    for (std::size_t j = 0; j < probs.cols; ++j) r[j] = p[j] * inv;
    r[static_cast<std::size_t>(labels[i])] -= inv;
  }
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// GCN
// ---------------------------------------------------------------------------

GcnParams init_gcn_params(std::size_t c_in, std::size_t hidden, std::size_t k,
                          int depth, Rng& rng) {
  if (depth < 1) throw InputError("init_gcn_params: depth must be >= 1");
  GcnParams p;
  for (int l = 0; l < depth; ++l) {
    std::size_t in = l == 0 ? c_in : hidden;
    std::size_t out = l == depth - 1 ? k : hidden;
    DenseMatrix w(in, out);
    const double lim = std::sqrt(6.0 / static_cast<double>(in + out));
    for (double& v : w.data) v = (2.0 * rng.uniform() - 1.0) * lim;
    p.w.push_back(std::move(w));
  }
  return p;
}

DenseMatrix gcn_forward(const GcnParams& params, const SparseAdjacency& a_hat,
                        const DenseMatrix& x, bool residual, double dropout,
                        Rng* rng, GcnCache* cache) {
  const int depth = static_cast<int>(params.w.size());
  if (depth < 1) throw InputError("gcn_forward: no layers");
  if (x.cols != params.w[0].rows)
    throw InputError("gcn_forward: input width mismatch");
  const bool use_dropout = dropout > 0.0 && rng != nullptr;
  if (cache) {
    cache->mask.clear();
    cache->m.clear();
    cache->z.clear();
  }

  DenseMatrix h = x;
  for (int l = 0; l < depth; ++l) {
    DenseMatrix dropped = h;
    DenseMatrix mask;
    if (use_dropout) mask = dropout_in_place(dropped, dropout, *rng);
    DenseMatrix m = spmm(a_hat, dropped);
    DenseMatrix z = ops::matmul(m, params.w[static_cast<std::size_t>(l)]);

    DenseMatrix next;
    if (l < depth - 1) {
      next = ops::relu(z);
      if (residual && next.cols == h.cols) ops::add_in_place(next, h);
    } else {
      next = z;
    }
    if (cache) {
      cache->mask.push_back(std::move(mask));
      cache->m.push_back(std::move(m));
      cache->z.push_back(std::move(z));
    }
    h = std::move(next);
  }
  if (cache) cache->valid = true;
  return h;
}

std::vector<DenseMatrix> gcn_backward(const GcnParams& params,
                                      const SparseAdjacency& a_hat,
                                      const GcnCache& cache,
                                      const DenseMatrix& dlogits,
                                      bool residual, double l2_first_layer) {
  if (!cache.valid) throw InputError("gcn_backward: forward cache is empty");
  const int depth = static_cast<int>(params.w.size());
  std::vector<DenseMatrix> grads(params.w.size());

  DenseMatrix dh = dlogits;
  for (int l = depth - 1; l >= 0; --l) {
    const auto li = static_cast<std::size_t>(l);
    DenseMatrix dz = dh;
    if (l < depth - 1)
      kernels::relu_mask(dz.data.data(), cache.z[li].data.data(),
                         dz.data.size());

    grads[li] = ops::matmul_tn(cache.m[li], dz);
    if (l == 0 && l2_first_layer != 0.0)
      kernels::axpy(grads[0].data.data(), l2_first_layer,
                    params.w[0].data.data(), grads[0].data.size());

    DenseMatrix dm = ops::matmul_nt(dz, params.w[li]);
    DenseMatrix dd = spmm(a_hat, dm);  // A_hat is symmetric
    if (cache.mask[li].data.size() == dd.data.size())
      kernels::mul(dd.data.data(), cache.mask[li].data.data(),
                   dd.data.size());
    // Identity path of the residual connection.
    if (l < depth - 1 && residual &&
        params.w[li].rows == params.w[li].cols)
      ops::add_in_place(dd, dh);
    dh = std::move(dd);
  }
  return grads;
}

std::pair<GcnParams, FitReport> train_gcn(
    const SparseAdjacency& a_hat, const DenseMatrix& x,
    std::span<const int> labels, std::span<const std::uint32_t> train_idx,
    std::span<const std::uint32_t> val_idx, const TrainConfig& cfg, int depth,
    bool residual) {
  if (train_idx.empty()) throw InputError("train_gcn: empty training set");
  const int k = num_classes_of(labels);

  Rng master(cfg.seed);
  Rng init_rng = master.fork(0);
  GcnParams params = init_gcn_params(x.cols, cfg.hidden,
                                     static_cast<std::size_t>(k), depth,
                                     init_rng);

  AdamConfig opt{.lr = cfg.lr, .weight_decay = cfg.weight_decay};
  std::vector<AdamState> states;
  for (const DenseMatrix& w : params.w) states.emplace_back(w.size());

  const bool track_val = !val_idx.empty();
  EarlyStopper stopper(cfg.patience);
  GcnParams best = params;
  FitReport report;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    GcnCache cache;
    DenseMatrix logits =
        gcn_forward(params, a_hat, x, residual, cfg.dropout, &master, &cache);
    DenseMatrix probs = softmax_rows(logits);
    double train_loss = subset_loss(probs, labels, train_idx);
    DenseMatrix dlogits = subset_dlogits(probs, labels, train_idx);
    std::vector<DenseMatrix> grads = gcn_backward(
        params, a_hat, cache, dlogits, residual, cfg.l2_first_layer);
    for (std::size_t i = 0; i < params.w.size(); ++i)
      adam_step(params.w[i].data, grads[i].data, states[i], opt);

    report.epochs_run = epoch;
    report.final_train_loss = train_loss;
    if (!track_val) continue;

    DenseMatrix eval = gcn_forward(params, a_hat, x, residual);
    DenseMatrix eval_probs = softmax_rows(eval);
    double val_acc = subset_accuracy(eval_probs, labels, val_idx);
    double val_loss = subset_loss(eval_probs, labels, val_idx);
    if (stopper.update(val_acc, val_loss)) {
      best = params;
      report.best_epoch = epoch;
      report.best_val_acc = val_acc;
      report.best_val_loss = val_loss;
    }
    if (stopper.should_stop()) break;
  }
  if (track_val) params = std::move(best);
  return {std::move(params), report};
}

// ---------------------------------------------------------------------------
// SGC / AdaSGC
// ---------------------------------------------------------------------------

DenseMatrix sgc_forward(const LinearParams& params,
                        const SparseAdjacency& a_hat, const DenseMatrix& x,
                        int l) {
  if (l < 0) throw InputError("sgc_forward: negative depth");
  std::vector<DenseMatrix> chain = propagate_chain(a_hat, x, l);
  return ops::matmul(chain[static_cast<std::size_t>(l)], params.w);
}

FitReport fit_linear(LinearParams& params, const DenseMatrix& btrain,
                     std::span<const int> ytrain,
                     std::span<const double> weights, const DenseMatrix& bval,
                     std::span<const int> yval, const TrainConfig& cfg) {
  if (btrain.rows == 0) throw InputError("fit_linear: empty training set");
  if (weights.size() != btrain.rows || ytrain.size() != btrain.rows)
    throw InputError("fit_linear: weights/labels must align with rows");

  AdamConfig opt{.lr = cfg.lr, .weight_decay = cfg.weight_decay};
  AdamState state(params.w.size());
  const bool track_val = bval.rows > 0;
  EarlyStopper stopper(cfg.patience);
  LinearParams best = params;
  FitReport report;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    DenseMatrix logits = ops::matmul(btrain, params.w);
    DenseMatrix probs = softmax_rows(logits);
    double train_loss = weighted_ce_loss(probs, ytrain, weights, params.w,
                                         cfg.l2_first_layer);

    DenseMatrix dlogits = probs;
    for (std::size_t i = 0; i < dlogits.rows; ++i) {
      double* r = dlogits.row(i);
      r[static_cast<std::size_t>(ytrain[i])] -= 1.0;
      for (std::size_t j = 0; j < dlogits.cols; ++j) r[j] *= weights[i];
    }
    DenseMatrix grad = ops::matmul_tn(btrain, dlogits);
    if (cfg.l2_first_layer != 0.0)
      kernels::axpy(grad.data.data(), cfg.l2_first_layer,
                    params.w.data.data(), grad.data.size());
    adam_step(params.w.data, grad.data, state, opt);

    report.epochs_run = epoch;
    report.final_train_loss = train_loss;
    if (!track_val) continue;

    DenseMatrix val_probs = softmax_rows(ops::matmul(bval, params.w));
    double val_acc = accuracy(argmax_rows(val_probs), yval);
    double val_loss = 0.0;
    for (std::size_t i = 0; i < val_probs.rows; ++i)
      val_loss -= std::log(std::max(
          val_probs(i, static_cast<std::size_t>(yval[i])), 1e-10));
    val_loss /= static_cast<double>(val_probs.rows);
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

AdaSgcEnsemble run_adasgc(const std::vector<DenseMatrix>& chain,
                          std::span<const int> labels, int num_classes,
                          std::span<const std::uint32_t> train_idx,
                          std::span<const std::uint32_t> val_idx,
                          const AdaGcnConfig& cfg) {
  if (cfg.depth < 0) throw InputError("run_adasgc: depth must be >= 0");
  if (chain.size() != static_cast<std::size_t>(cfg.depth) + 1)
    throw InputError("run_adasgc: chain length does not match depth");
  if (train_idx.empty()) throw InputError("run_adasgc: empty training set");

  AdaSgcEnsemble ens;
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
  LinearParams params;
  params.w = DenseMatrix(chain[0].cols, k);
  const double lim = std::sqrt(6.0 / static_cast<double>(chain[0].cols + k));
  for (double& v : params.w.data) v = (2.0 * init_rng.uniform() - 1.0) * lim;

  for (int l = 0; l <= cfg.depth; ++l) {
    const DenseMatrix& feats = chain[static_cast<std::size_t>(l)];
    DenseMatrix bt = ops::select_rows(feats, train_idx);
    DenseMatrix bv = ops::select_rows(feats, val_idx);
    TrainConfig tc = cfg.train;
    tc.seed = master.next_u64();
    FitReport rep = fit_linear(params, bt, ytrain, weights, bv, yval, tc);

    DenseMatrix probs = softmax_rows(ops::matmul(bt, params.w));

    LayerStats st;
    st.layer = l;
    st.epochs_run = rep.epochs_run;

    AdaSgcLayer layer;
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
      DenseMatrix logits = ops::matmul(bv, ens.layers.back().params.w);
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

DenseMatrix adasgc_scores(const AdaSgcEnsemble& ens,
                          const std::vector<DenseMatrix>& chain) {
  if (chain.size() < ens.layers.size())
    throw InputError("adasgc_scores: feature chain shorter than ensemble");
  const std::size_t n = chain[0].rows;
  const std::size_t k = static_cast<std::size_t>(ens.num_classes);
  DenseMatrix scores(n, k);
  for (std::size_t l = 0; l < ens.layers.size(); ++l) {
    DenseMatrix logits = ops::matmul(chain[l], ens.layers[l].params.w);
    if (ens.variant == BoostVariant::kSamme) {
      std::vector<int> pred = argmax_rows(logits);
      for (std::size_t i = 0; i < n; ++i)
        scores(i, static_cast<std::size_t>(pred[i])) += ens.layers[l].alpha;
    } else {
      ops::add_in_place(scores, sammer_h(softmax_rows(logits)));
    }
  }
  return scores;
}

std::vector<int> adasgc_predict(const AdaSgcEnsemble& ens,
                                const std::vector<DenseMatrix>& chain) {
  return argmax_rows(adasgc_scores(ens, chain));
}

// ---------------------------------------------------------------------------
// PPNP / APPNP
// ---------------------------------------------------------------------------

namespace {

void check_gamma(double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0))
    throw InputError("gamma must be in (0, 1]");
}

}  // namespace

DenseMatrix ppnp_exact(const DenseMatrix& f, const SparseAdjacency& a_hat,
                       double gamma) {
  check_gamma(gamma);
  const std::size_t n = a_hat.n;
  if (n > 2000)
    throw InputError("ppnp_exact: dense solve guarded to n <= 2000, got " +
                     std::to_string(n));
  if (f.rows != n) throw InputError("ppnp_exact: dimension mismatch");

  // M = I - (1-gamma) A_hat, strictly diagonally dominant for gamma > 0.
  std::vector<double> m(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t e = a_hat.row_ptr[i]; e < a_hat.row_ptr[i + 1]; ++e)
      m[i * n + a_hat.col_idx[e]] = -(1.0 - gamma) * a_hat.values[e];
    m[i * n + i] += 1.0;
  }

  // In-place LU with partial pivoting.
  std::vector<std::size_t> piv(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m[i * n + k]) > std::abs(m[p * n + k])) p = i;
    piv[k] = p;
    if (p != k)
      for (std::size_t j = 0; j < n; ++j) std::swap(m[k * n + j], m[p * n + j]);
    if (m[k * n + k] == 0.0) throw InputError("ppnp_exact: singular system");
    for (std::size_t i = k + 1; i < n; ++i) {
      m[i * n + k] /= m[k * n + k];
      const double lik = m[i * n + k];
      for (std::size_t j = k + 1; j < n; ++j) m[i * n + j] -= lik * m[k * n + j];
    }
  }

  DenseMatrix z(n, f.cols);
  std::vector<double> rhs(n);
  for (std::size_t c = 0; c < f.cols; ++c) {
    for (std::size_t i = 0; i < n; ++i) rhs[i] = gamma * f(i, c);
    for (std::size_t k = 0; k < n; ++k)
      if (piv[k] != k) std::swap(rhs[k], rhs[piv[k]]);
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t j = 0; j < i; ++j) rhs[i] -= m[i * n + j] * rhs[j];
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = i + 1; j < n; ++j) rhs[i] -= m[i * n + j] * rhs[j];
      rhs[i] /= m[i * n + i];
    }
    for (std::size_t i = 0; i < n; ++i) z(i, c) = rhs[i];
  }
  return z;
}

DenseMatrix appnp_iterate(const DenseMatrix& f, const SparseAdjacency& a_hat,
                          double gamma, int steps) {
  check_gamma(gamma);
  if (steps < 1) throw InputError("appnp_iterate: need at least 1 step");
  if (f.rows != a_hat.n) throw InputError("appnp_iterate: dimension mismatch");
  DenseMatrix z = f;
  for (int t = 0; t < steps; ++t) {
    DenseMatrix next = spmm(a_hat, z);
    ops::scale_in_place(next, 1.0 - gamma);
    kernels::axpy(next.data.data(), gamma, f.data.data(), next.data.size());
    z = std::move(next);
  }
  return z;
}

std::pair<MlpParams, FitReport> train_appnp(
    const SparseAdjacency& a_hat, const DenseMatrix& x,
    std::span<const int> labels, std::span<const std::uint32_t> train_idx,
    std::span<const std::uint32_t> val_idx, const TrainConfig& cfg,
    double gamma, int power_iters) {
  check_gamma(gamma);
  if (train_idx.empty()) throw InputError("train_appnp: empty training set");
  const int k = num_classes_of(labels);

  Rng master(cfg.seed);
  Rng init_rng = master.fork(0);
  MlpParams params = init_params(x.cols, cfg.hidden,
                                 static_cast<std::size_t>(k), init_rng,
                                 cfg.use_bias);

  AdamConfig opt_w{.lr = cfg.lr, .weight_decay = cfg.weight_decay};
  AdamConfig opt_b{.lr = cfg.lr, .weight_decay = 0.0};
  AdamState st_w0(params.w0.size()), st_w1(params.w1.size());
  AdamState st_b0(params.b0.size()), st_b1(params.b1.size());

  const bool track_val = !val_idx.empty();
  EarlyStopper stopper(cfg.patience);
  MlpParams best = params;
  FitReport report;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    MlpCache cache;
    DenseMatrix f = mlp_forward(params, x, cfg.dropout, &master, &cache);
    DenseMatrix z = appnp_iterate(f, a_hat, gamma, power_iters);
    DenseMatrix probs = softmax_rows(z);
    double train_loss = subset_loss(probs, labels, train_idx);
    DenseMatrix dz = subset_dlogits(probs, labels, train_idx);
    // The propagation operator is a symmetric polynomial in A_hat, so its
    // adjoint is itself: dL/df = appnp(dL/dz).
    DenseMatrix df = appnp_iterate(dz, a_hat, gamma, power_iters);
    MlpGrads g = mlp_backward_from(params, cache, df, cfg.l2_first_layer);

    adam_step(params.w0.data, g.w0.data, st_w0, opt_w);
    adam_step(params.w1.data, g.w1.data, st_w1, opt_w);
    if (params.use_bias) {
      adam_step(params.b0, g.b0, st_b0, opt_b);
      adam_step(params.b1, g.b1, st_b1, opt_b);
    }

    report.epochs_run = epoch;
    report.final_train_loss = train_loss;
    if (!track_val) continue;

    DenseMatrix eval =
        appnp_iterate(mlp_forward(params, x), a_hat, gamma, power_iters);
    DenseMatrix eval_probs = softmax_rows(eval);
    double val_acc = subset_accuracy(eval_probs, labels, val_idx);
    double val_loss = subset_loss(eval_probs, labels, val_idx);
    if (stopper.update(val_acc, val_loss)) {
      best = params;
      report.best_epoch = epoch;
      report.best_val_acc = val_acc;
      report.best_val_loss = val_loss;
    }
    if (stopper.should_stop()) break;
  }
  if (track_val) params = best;
  return {std::move(params), report};
}

// ---------------------------------------------------------------------------
// Proposition verifiers
// ---------------------------------------------------------------------------

SparseAdjacency random_connected_graph(std::size_t n, std::size_t extra,
                                       Rng& rng) {
  if (n == 0) throw InputError("random_connected_graph: need n >= 1");
  EdgeList edges;
  for (std::uint32_t i = 1; i < n; ++i)
    edges.emplace_back(static_cast<std::uint32_t>(rng.below(i)), i);
  for (std::size_t e = 0; e < extra; ++e) {
    auto a = static_cast<std::uint32_t>(rng.below(n));
    auto b = static_cast<std::uint32_t>(rng.below(n));
    if (a != b) edges.emplace_back(a, b);
  }
  return build_from_edge_list(n, edges);
}

Prop1Report verify_prop1(std::size_t n, double gamma, std::uint64_t seed) {
  check_gamma(gamma);
  if (n > 100) throw InputError("verify_prop1: guarded to n <= 100");
  Rng rng(seed);
  SparseAdjacency a_hat = sym_normalize(random_connected_graph(n, n / 2, rng));
  DenseMatrix f(n, 3);
  for (double& v : f.data) v = rng.normal();

  Prop1Report rep;
  rep.gamma = gamma;
  DenseMatrix z = ppnp_exact(f, a_hat, gamma);

  // Neumann series gamma * sum_{l<=T} (1-gamma)^l A_hat^l f with T such that
  // (1-gamma)^T < 1e-10.
  int t_max = 1;
  if (gamma < 1.0)
    t_max = static_cast<int>(
                std::ceil(std::log(1e-10) / std::log(1.0 - gamma))) +
            1;
  DenseMatrix term = f;
  DenseMatrix series(n, f.cols);
  double coeff = gamma;
  kernels::axpy(series.data.data(), coeff, term.data.data(),
                series.data.size());
  for (int l = 1; l <= t_max; ++l) {
    term = spmm(a_hat, term);
    coeff *= 1.0 - gamma;
    kernels::axpy(series.data.data(), coeff, term.data.data(),
                  series.data.size());
  }
  {
    DenseMatrix diff = series;
    kernels::axpy(diff.data.data(), -1.0, z.data.data(), diff.data.size());
    rep.series_err = ops::frobenius_norm(diff);
  }

  for (int steps : {10, 50, 200}) {
    DenseMatrix approx = appnp_iterate(f, a_hat, gamma, steps);
    kernels::axpy(approx.data.data(), -1.0, z.data.data(),
                  approx.data.size());
    rep.appnp_gaps.emplace_back(steps, ops::frobenius_norm(approx));
  }
  // Monotone decrease up to 1e-12 noise (the gaps bottom out near the
  // double-precision floor once (1-gamma)^L underflows the solve accuracy).
  rep.gaps_decreasing = true;
  for (std::size_t i = 1; i < rep.appnp_gaps.size(); ++i)
    rep.gaps_decreasing =
        rep.gaps_decreasing &&
        rep.appnp_gaps[i].second <= rep.appnp_gaps[i - 1].second + 1e-12;
  rep.pass = rep.series_err <= 1e-8 && rep.gaps_decreasing;
  return rep;
}

Prop2Report verify_prop2(const SparseAdjacency& a_hat, const DenseMatrix& x,
                         std::span<const double> b,
                         std::span<const double> alphas) {
  if (b.empty() || b.size() != alphas.size())
    throw InputError("verify_prop2: b and alphas must be nonempty and equal");
  for (double bl : b)
    if (bl == 0.0)
      throw InputError("verify_prop2: b coefficients must be nonzero");
  for (double a : alphas)
    if (!(a > 0.0)) throw InputError("verify_prop2: alphas must be positive");

  const int depth = static_cast<int>(b.size()) - 1;
  std::vector<DenseMatrix> chain = propagate_chain(a_hat, x, depth);
  const std::size_t c = x.cols;

  DenseMatrix lhs(x.rows, c), rhs(x.rows, c);
  for (std::size_t l = 0; l < b.size(); ++l) {
    const double sign = b[l] > 0.0 ? 1.0 : -1.0;
    MlpParams p;
    p.use_bias = false;
    p.w0 = DenseMatrix(c, c);
    p.w1 = DenseMatrix(c, c);
    for (std::size_t i = 0; i < c; ++i) {
      p.w0(i, i) = std::abs(b[l]) / alphas[l];
      p.w1(i, i) = sign;
    }
    DenseMatrix f = mlp_forward(p, chain[l]);
    kernels::axpy(lhs.data.data(), alphas[l], f.data.data(), lhs.data.size());

    DenseMatrix r = ops::relu(chain[l]);
    kernels::axpy(rhs.data.data(), b[l], r.data.data(), rhs.data.size());
  }
  Prop2Report rep;
  rep.max_abs_err = ops::max_abs_diff(lhs, rhs);
  rep.pass = rep.max_abs_err <= 1e-9;
  return rep;
}

}  // namespace adagcn

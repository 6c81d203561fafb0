#include "adagcn/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "adagcn/baselines.hpp"
#include "adagcn/errors.hpp"
#include "adagcn/graph.hpp"

namespace adagcn {

ModelConfigs::ModelConfigs() {
  adagcn.hidden = 32;
  adagcn.l2_first_layer = 5e-3;
  adagcn.dropout = 0.0;
  adagcn.patience = 300;
  adagcn.max_epochs = 500;

  adasgc = adagcn;  // hidden unused by the linear base

  gcn.hidden = 16;
  gcn.l2_first_layer = 5e-4;
  gcn.dropout = 0.5;
  gcn.patience = 100;
  gcn.max_epochs = 500;

  gcn_res = gcn;

  sgc.l2_first_layer = 5e-4;
  sgc.dropout = 0.0;
  sgc.patience = 100;
  sgc.max_epochs = 500;

  appnp.hidden = 32;
  appnp.l2_first_layer = 5e-3;
  appnp.dropout = 0.5;
  appnp.patience = 100;
  appnp.max_epochs = 500;
}

namespace {

double now_ms() {
  using namespace std::chrono;
  return duration<double, std::milli>(steady_clock::now().time_since_epoch())
      .count();
}

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string join_g(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ';';
    s += fmt("%.6g", v[i]);
  }
  return s;
}

double subset_acc(const std::vector<int>& preds, std::span<const int> labels,
                  std::span<const std::uint32_t> idx) {
  if (idx.empty()) return 0.0;
  std::size_t hit = 0;
  for (std::uint32_t i : idx)
    if (preds[i] == labels[i]) ++hit;
  return static_cast<double>(hit) / static_cast<double>(idx.size());
}

struct Prepared {
  Dataset ds;
  Split split;
  SparseAdjacency a_hat;
};

Prepared prepare(const ExperimentConfig& cfg, std::uint64_t seed) {
  Prepared p;
  if (!cfg.edges_path.empty() || !cfg.nodes_path.empty()) {
    if (cfg.edges_path.empty() || cfg.nodes_path.empty())
      throw InputError("both edge and node files are required");
    p.ds = load_dataset(cfg.edges_path, cfg.nodes_path);
  } else {
    SbmConfig sc = cfg.sbm;
    sc.seed = seed;
    p.ds = generate_sbm(sc);
  }
  if (cfg.normalize_features) l1_normalize_rows(p.ds.features);
  SplitSpec ss = cfg.split;
  ss.seed = seed;
  p.split = make_split(p.ds, ss);
  p.a_hat = sym_normalize(p.ds.adjacency);
  return p;
}

const TrainConfig& model_config(const ExperimentConfig& cfg,
                                const std::string& model) {
  if (model == "adagcn") return cfg.models.adagcn;
  if (model == "adasgc") return cfg.models.adasgc;
  if (model == "gcn") return cfg.models.gcn;
  if (model == "gcn_res") return cfg.models.gcn_res;
  if (model == "sgc") return cfg.models.sgc;
  if (model == "appnp") return cfg.models.appnp;
  throw InputError("unknown model '" + model +
                   "' (expected adagcn, adasgc, gcn, gcn_res, sgc, appnp)");
}

}  // namespace

RunRecord run_single(const ExperimentConfig& cfg, const std::string& model,
                     int depth, std::uint64_t seed, bool timed) {
  timed = timed || cfg.timing;
  Prepared p = prepare(cfg, seed);
  const std::vector<int>& labels = p.ds.labels;
  TrainConfig tc = model_config(cfg, model);
  tc.seed = seed;

  RunRecord rec;
  rec.model = model;
  rec.depth = depth;
  rec.seed = seed;
  const long ops0 = sparse_op_count();
  std::vector<int> preds;

  if (model == "adagcn" || model == "adasgc") {
    double t0 = now_ms();
    std::vector<DenseMatrix> chain =
        propagate_chain(p.a_hat, p.ds.features, depth);
    if (timed) rec.propagate_ms = now_ms() - t0;

    AdaGcnConfig bc;
    bc.depth = depth;
    bc.variant = cfg.variant;
    bc.train = tc;
    double t1 = now_ms();
    std::vector<LayerStats> stats;
    if (model == "adagcn") {
      Ensemble ens = run_adagcn(chain, labels, p.ds.num_classes,
                                p.split.train, p.split.val, bc);
      preds = ensemble_predict(ens, chain);
      stats = ens.stats;
    } else {
      AdaSgcEnsemble ens = run_adasgc(chain, labels, p.ds.num_classes,
                                      p.split.train, p.split.val, bc);
      preds = adasgc_predict(ens, chain);
      stats = ens.stats;
    }
    double fit_ms = now_ms() - t1;
    for (const LayerStats& st : stats) {
      rec.epochs += st.epochs_run;
      rec.alphas.push_back(st.alpha);
      if (cfg.variant == BoostVariant::kSamme)
        rec.errs.push_back(st.weighted_err);
    }
    if (timed && rec.epochs > 0) rec.per_epoch_ms = fit_ms / rec.epochs;
  } else if (model == "gcn" || model == "gcn_res") {
    const bool residual = model == "gcn_res";
    double t1 = now_ms();
    auto [params, rep] = train_gcn(p.a_hat, p.ds.features, labels,
                                   p.split.train, p.split.val, tc, depth,
                                   residual);
    double fit_ms = now_ms() - t1;
    preds = argmax_rows(gcn_forward(params, p.a_hat, p.ds.features, residual));
    rec.epochs = rep.epochs_run;
    if (timed && rec.epochs > 0) rec.per_epoch_ms = fit_ms / rec.epochs;
  } else if (model == "sgc") {
    double t0 = now_ms();
    std::vector<DenseMatrix> chain =
        propagate_chain(p.a_hat, p.ds.features, depth);
    if (timed) rec.propagate_ms = now_ms() - t0;
    const DenseMatrix& feats = chain[static_cast<std::size_t>(depth)];
    DenseMatrix bt = ops::select_rows(feats, p.split.train);
    DenseMatrix bv = ops::select_rows(feats, p.split.val);
    std::vector<int> yt(p.split.train.size()), yv(p.split.val.size());
    for (std::size_t i = 0; i < yt.size(); ++i)
      yt[i] = labels[p.split.train[i]];
    for (std::size_t i = 0; i < yv.size(); ++i) yv[i] = labels[p.split.val[i]];
    std::vector<double> w(yt.size(), 1.0 / static_cast<double>(yt.size()));

    LinearParams lp;
    lp.w = DenseMatrix(feats.cols, static_cast<std::size_t>(p.ds.num_classes));
    Rng init_rng = Rng(tc.seed).fork(0);
    const double lim =
        std::sqrt(6.0 / static_cast<double>(lp.w.rows + lp.w.cols));
    for (double& v : lp.w.data) v = (2.0 * init_rng.uniform() - 1.0) * lim;

    double t1 = now_ms();
    FitReport rep = fit_linear(lp, bt, yt, w, bv, yv, tc);
    double fit_ms = now_ms() - t1;
    preds = argmax_rows(ops::matmul(feats, lp.w));
    rec.epochs = rep.epochs_run;
    if (timed && rec.epochs > 0) rec.per_epoch_ms = fit_ms / rec.epochs;
  } else if (model == "appnp") {
    double t1 = now_ms();
    auto [params, rep] = train_appnp(p.a_hat, p.ds.features, labels,
                                     p.split.train, p.split.val, tc,
                                     cfg.gamma, depth);
    double fit_ms = now_ms() - t1;
    preds = argmax_rows(appnp_iterate(mlp_forward(params, p.ds.features),
                                      p.a_hat, cfg.gamma, depth));
    rec.epochs = rep.epochs_run;
    if (timed && rec.epochs > 0) rec.per_epoch_ms = fit_ms / rec.epochs;
  } else {
    model_config(cfg, model);  // throws with the full model list
  }

  rec.sparse_ops = sparse_op_count() - ops0;
  rec.train_acc = subset_acc(preds, labels, p.split.train);
  rec.val_acc = subset_acc(preds, labels, p.split.val);
  rec.test_acc = subset_acc(preds, labels, p.split.test);
  return rec;
}

// ---------------------------------------------------------------------------
// CSV output
// ---------------------------------------------------------------------------

namespace {

const char* kRunHeader =
    "model,depth,seed,train_acc,val_acc,test_acc,epochs,sparse_ops,"
    "propagate_ms,per_epoch_ms,alphas,errs";

std::string run_row(const RunRecord& r) {
  std::string s = r.model + ',' + std::to_string(r.depth) + ',' +
                  std::to_string(r.seed) + ',' + fmt("%.6f", r.train_acc) +
                  ',' + fmt("%.6f", r.val_acc) + ',' +
                  fmt("%.6f", r.test_acc) + ',' + std::to_string(r.epochs) +
                  ',' + std::to_string(r.sparse_ops) + ',';
  if (r.propagate_ms >= 0.0) s += fmt("%.3f", r.propagate_ms);
  s += ',';
  if (r.per_epoch_ms >= 0.0) s += fmt("%.4f", r.per_epoch_ms);
  s += ',' + join_g(r.alphas) + ',' + join_g(r.errs);
  return s;
}

struct MeanSd {
  double mean = 0.0, sd = 0.0;
};

MeanSd mean_sd(const std::vector<double>& v) {
  MeanSd m;
  if (v.empty()) return m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  for (double x : v) m.sd += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(m.sd / static_cast<double>(v.size()));
  return m;
}

std::string pm(const MeanSd& m, const char* spec) {
  return fmt(spec, m.mean) + "±" + fmt(spec, m.sd);
}

std::string summary_row(const std::vector<RunRecord>& rows) {
  auto collect = [&](auto get) {
    std::vector<double> v;
    for (const RunRecord& r : rows) v.push_back(get(r));
    return v;
  };
  const RunRecord& first = rows.front();
  std::string s = first.model + ',' + std::to_string(first.depth) +
                  ",summary,";
  s += pm(mean_sd(collect([](const RunRecord& r) { return r.train_acc; })),
          "%.6f") + ',';
  s += pm(mean_sd(collect([](const RunRecord& r) { return r.val_acc; })),
          "%.6f") + ',';
  s += pm(mean_sd(collect([](const RunRecord& r) { return r.test_acc; })),
          "%.6f") + ',';
  s += pm(mean_sd(collect([](const RunRecord& r) {
           return static_cast<double>(r.epochs);
         })),
          "%.1f") + ',';
  s += pm(mean_sd(collect([](const RunRecord& r) {
           return static_cast<double>(r.sparse_ops);
         })),
          "%.1f") + ',';
  bool timed = true;
  for (const RunRecord& r : rows)
    timed = timed && r.per_epoch_ms >= 0.0;
  if (timed && first.propagate_ms >= 0.0)
    s += pm(mean_sd(collect([](const RunRecord& r) {
             return r.propagate_ms;
           })),
            "%.3f");
  s += ',';
  if (timed)
    s += pm(mean_sd(collect([](const RunRecord& r) {
             return r.per_epoch_ms;
           })),
            "%.4f");
  s += ",,";
  return s;
}

class CsvOut {
 public:
  explicit CsvOut(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw InputError("cannot write output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

}  // namespace

int cmd_train(const ExperimentConfig& cfg) {
  if (cfg.repeats < 1) throw InputError("repeats must be >= 1");
  std::vector<RunRecord> rows;
  for (int r = 0; r < cfg.repeats; ++r)
    rows.push_back(run_single(cfg, cfg.model, cfg.depth,
                              cfg.seed + static_cast<std::uint64_t>(r)));
  CsvOut out(cfg.out);
  out.stream() << kRunHeader << '\n';
  for (const RunRecord& r : rows) out.stream() << run_row(r) << '\n';
  out.stream() << summary_row(rows) << '\n';
  return 0;
}

int cmd_depth_sweep(const ExperimentConfig& cfg) {
  if (cfg.depths.empty())
    throw InputError("depth-sweep needs --depths (e.g. --depths 2,5,10,15)");
  if (cfg.repeats < 1) throw InputError("repeats must be >= 1");
  std::vector<std::string> models = cfg.sweep_models;
  if (models.empty()) models = {"gcn", "gcn_res", "sgc", "adagcn"};

  CsvOut out(cfg.out);
  out.stream() << kRunHeader << '\n';
  for (const std::string& model : models)
    for (int depth : cfg.depths) {
      std::vector<RunRecord> rows;
      for (int r = 0; r < cfg.repeats; ++r)
        rows.push_back(run_single(cfg, model, depth,
                                  cfg.seed + static_cast<std::uint64_t>(r)));
      for (const RunRecord& rr : rows) out.stream() << run_row(rr) << '\n';
      out.stream() << summary_row(rows) << '\n';
    }
  return 0;
}

namespace {

struct OlsFit {
  double k = 0.0, c = 0.0, r2 = 1.0;
};

OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  OlsFit f;
  const auto n = static_cast<double>(x.size());
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= n;
  ym /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
    syy += (y[i] - ym) * (y[i] - ym);
  }
  f.k = sxy / sxx;
  f.c = ym - f.k * xm;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

}  // namespace

int cmd_bench(const ExperimentConfig& cfg) {
  if (cfg.depths.size() < 3)
    throw InputError("bench needs at least 3 depths");
  // Fixed-epoch training so per-epoch time is well defined at every depth.
  ExperimentConfig bench = cfg;
  for (TrainConfig* tc :
       {&bench.models.adagcn, &bench.models.gcn, &bench.models.sgc}) {
    tc->max_epochs = cfg.bench_epochs;
    tc->patience = cfg.bench_epochs;
  }

  CsvOut out(cfg.out);
  out.stream() << "kind,model,depth,per_epoch_ms,propagate_ms,sparse_ops,"
                  "epochs,slope_ms_per_depth,intercept_ms,r2\n";
  for (const std::string& model : {std::string("gcn"), std::string("sgc"),
                                   std::string("adagcn")}) {
    std::vector<double> xs, ys;
    for (int depth : cfg.depths) {
      RunRecord best;
      for (int rep = 0; rep < std::max(1, cfg.bench_reps); ++rep) {
        RunRecord r = run_single(bench, model, depth, cfg.seed, true);
        if (rep == 0 || r.per_epoch_ms < best.per_epoch_ms) best = r;
      }
      xs.push_back(depth);
      ys.push_back(best.per_epoch_ms);
      out.stream() << "run," << model << ',' << depth << ','
                   << fmt("%.4f", best.per_epoch_ms) << ','
                   << (best.propagate_ms >= 0.0
                           ? fmt("%.3f", best.propagate_ms)
                           : std::string())
                   << ',' << best.sparse_ops << ',' << best.epochs
                   << ",,,\n";
    }
    OlsFit f = ols(xs, ys);
    out.stream() << "fit," << model << ",,,,,," << fmt("%.5f", f.k) << ','
                 << fmt("%.4f", f.c) << ',' << fmt("%.4f", f.r2) << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

namespace {

struct CheckResult {
  std::string name;
  bool pass = false;
  double err = 0.0;
  std::string detail;
};

// Central finite differences against the analytic MLP gradients on a random
// (n=8, C=5, H=4, K=3) instance with random sample weights.
double gradient_check(std::uint64_t seed) {
  const std::size_t n = 8, c = 5, h = 4, k = 3;
  Rng rng(seed);
  MlpParams params = init_params(c, h, k, rng);
  DenseMatrix x(n, c);
  for (double& v : x.data) v = rng.normal();
  std::vector<int> labels(n);
  for (int& l : labels) l = static_cast<int>(rng.below(k));
  std::vector<double> w(n);
  double wsum = 0.0;
  for (double& v : w) {
    v = 0.05 + rng.uniform();
    wsum += v;
  }
  for (double& v : w) v /= wsum;
  const double l2 = 1e-3;

  auto loss_at = [&]() {
    DenseMatrix probs = softmax_rows(mlp_forward(params, x));
    return weighted_ce_loss(probs, labels, w, params.w0, l2);
  };
  MlpCache cache;
  mlp_forward(params, x, 0.0, nullptr, &cache);
  MlpGrads g = mlp_backward(params, cache, labels, w, l2);

  const double step = 1e-5;
  double max_rel = 0.0;
  auto check_tensor = [&](std::span<double> p, std::span<const double> grad) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      double keep = p[i];
      p[i] = keep + step;
      double lp = loss_at();
      p[i] = keep - step;
      double lm = loss_at();
      p[i] = keep;
      double fd = (lp - lm) / (2.0 * step);
      double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-5});
      max_rel = std::max(max_rel, std::abs(fd - grad[i]) / denom);
    }
  };
  check_tensor(params.w0.data, g.w0.data);
  check_tensor(params.w1.data, g.w1.data);
  check_tensor(params.b0, g.b0);
  check_tensor(params.b1, g.b1);
  return max_rel;
}

// Scalar re-implementation of SAMME.R steps 4-7 for one boosting round.
double sammer_brute_force_diff() {
  const std::size_t n = 6, k = 3;
  const double probs_raw[n][k] = {
      {0.70, 0.20, 0.10}, {0.10, 0.60, 0.30}, {0.25, 0.25, 0.50},
      {0.05, 0.90, 0.05}, {0.55, 0.15, 0.30}, {0.34, 0.33, 0.33}};
  const int labels[n] = {0, 1, 2, 0, 2, 1};
  DenseMatrix probs(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < k; ++j) probs(i, j) = probs_raw[i][j];
  std::vector<int> lab(labels, labels + n);

  // Library path.
  DenseMatrix h = sammer_h(probs);
  std::vector<double> w(n, 1.0 / n);
  sammer_update_weights(w, probs, lab);

  // Straight scalar transcription.
  double max_diff = 0.0;
  std::vector<double> bw(n, 1.0 / n);
  double bsum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double logp[k];
    double mean = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      logp[j] = std::log(std::max(probs_raw[i][j], 1e-10));
      mean += logp[j];
    }
    mean /= k;
    for (std::size_t j = 0; j < k; ++j) {
      double hij = (static_cast<double>(k) - 1.0) * (logp[j] - mean);
      max_diff = std::max(max_diff, std::abs(hij - h(i, j)));
    }
    bw[i] *= std::exp(-((static_cast<double>(k) - 1.0) / k) *
                      logp[labels[i]]);
    bsum += bw[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    bw[i] /= bsum;
    max_diff = std::max(max_diff, std::abs(bw[i] - w[i]));
  }
  return max_diff;
}

}  // namespace

int cmd_verify(const ExperimentConfig&) {
  std::vector<CheckResult> results;

  for (double gamma : {0.1, 0.2, 0.5})
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
      Prop1Report rep = verify_prop1(20, gamma, seed);
      CheckResult cr;
      cr.name = "prop1 gamma=" + fmt("%.1f", gamma) +
                " seed=" + std::to_string(seed);
      cr.pass = rep.pass;
      cr.err = rep.series_err;
      std::string gaps;
      for (const auto& [steps, gap] : rep.appnp_gaps) {
        if (!gaps.empty()) gaps += " -> ";
        gaps += fmt("%.3g", gap);
      }
      cr.detail = "series_err=" + fmt("%.3g", rep.series_err) +
                  " appnp_gaps " + gaps;
      results.push_back(cr);
    }

  {
    Rng rng(7);
    for (int draw = 0; draw < 20; ++draw) {
      std::size_t n = 3 + rng.below(8);          // n <= 10
      int depth = static_cast<int>(rng.below(5));  // L <= 4
      SparseAdjacency a_hat =
          sym_normalize(random_connected_graph(n, n / 2, rng));
      std::size_t c = 2 + rng.below(4);
      DenseMatrix x(n, c);
      const bool nonneg = draw % 2 == 0;
      for (double& v : x.data)
        v = nonneg ? std::abs(rng.normal()) : rng.normal();
      std::vector<double> b, alphas;
      for (int l = 0; l <= depth; ++l) {
        double mag = 0.25 + 2.0 * rng.uniform();
        b.push_back(rng.uniform() < 0.5 ? -mag : mag);
        alphas.push_back(0.25 + 2.0 * rng.uniform());
      }
      Prop2Report rep = verify_prop2(a_hat, x, b, alphas);
      CheckResult cr;
      cr.name = "prop2 draw=" + std::to_string(draw);
      cr.pass = rep.pass;
      cr.err = rep.max_abs_err;
      cr.detail = "max_abs_err=" + fmt("%.3g", rep.max_abs_err);
      results.push_back(cr);
    }
  }

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    double rel = gradient_check(seed);
    CheckResult cr;
    cr.name = "gradient seed=" + std::to_string(seed);
    cr.pass = rel < 1e-5;
    cr.err = rel;
    cr.detail = "max_rel_err=" + fmt("%.3g", rel);
    results.push_back(cr);
  }

  {
    double diff = sammer_brute_force_diff();
    CheckResult cr;
    cr.name = "samme.r brute force";
    cr.pass = diff <= 1e-12;
    cr.err = diff;
    cr.detail = "max_abs_diff=" + fmt("%.3g", diff);
    results.push_back(cr);
  }

  int failures = 0;
  for (const CheckResult& cr : results) {
    if (!cr.pass) ++failures;
    std::cout << (cr.pass ? "PASS " : "FAIL ") << cr.name << " ("
              << cr.detail << ")\n";
  }
  std::cout << results.size() - failures << "/" << results.size()
            << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

int cmd_gen_sbm(const ExperimentConfig& cfg, const std::string& out_prefix) {
  if (out_prefix.empty())
    throw InputError("gen-sbm needs --out PREFIX (writes PREFIX.edges and "
                     "PREFIX.nodes)");
  SbmConfig sc = cfg.sbm;
  sc.seed = cfg.seed;
  Dataset ds = generate_sbm(sc);
  save_dataset(ds, out_prefix + ".edges", out_prefix + ".nodes");
  std::cout << "wrote " << out_prefix << ".edges / .nodes: "
            << ds.adjacency.n << " nodes, " << ds.adjacency.nnz() / 2
            << " edges, " << ds.features.cols << " features, "
            << ds.num_classes << " classes\n";
  return 0;
}

// ---------------------------------------------------------------------------
// Config file
// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("config key '" + key + "': expected a boolean, got '" + v +
                   "'");
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InputError("config key '" + key + "': expected a number, got '" +
                     v + "'");
  }
}

long parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    long d = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw InputError("config key '" + key + "': expected an integer, got '" +
                     v + "'");
  }
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void apply_train_key(TrainConfig& tc, const std::string& key,
                     const std::string& value) {
  if (key == "hidden")
    tc.hidden = static_cast<std::size_t>(parse_int(value, key));
  else if (key == "lr")
    tc.lr = parse_double(value, key);
  else if (key == "l2")
    tc.l2_first_layer = parse_double(value, key);
  else if (key == "weight_decay")
    tc.weight_decay = parse_double(value, key);
  else if (key == "dropout")
    tc.dropout = parse_double(value, key);
  else if (key == "patience")
    tc.patience = static_cast<int>(parse_int(value, key));
  else if (key == "max_epochs")
    tc.max_epochs = static_cast<int>(parse_int(value, key));
  else if (key == "use_bias")
    tc.use_bias = parse_bool(value, key);
  else
    throw InputError("unknown model config key '" + key + "'");
}

}  // namespace

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw InputError("cannot open config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  TrainConfig* section = nullptr;
  while (std::getline(f, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    try {
      if (t.front() == '[' && t.back() == ']') {
        std::string name = trim(t.substr(1, t.size() - 2));
        if (name == "adagcn")
          section = &cfg.models.adagcn;
        else if (name == "adasgc")
          section = &cfg.models.adasgc;
        else if (name == "gcn")
          section = &cfg.models.gcn;
        else if (name == "gcn_res")
          section = &cfg.models.gcn_res;
        else if (name == "sgc")
          section = &cfg.models.sgc;
        else if (name == "appnp")
          section = &cfg.models.appnp;
        else
          throw InputError("unknown config section [" + name + "]");
        continue;
      }
      std::size_t eq = t.find('=');
      if (eq == std::string::npos)
        throw InputError("expected key = value, got '" + t + "'");
      std::string key = trim(t.substr(0, eq));
      std::string value = trim(t.substr(eq + 1));
      if (section) {
        apply_train_key(*section, key, value);
        continue;
      }
      if (key == "model")
        cfg.model = value;
      else if (key == "depth")
        cfg.depth = static_cast<int>(parse_int(value, key));
      else if (key == "depths") {
        cfg.depths.clear();
        for (const std::string& d : split_list(value))
          cfg.depths.push_back(static_cast<int>(parse_int(d, key)));
      } else if (key == "seed")
        cfg.seed = static_cast<std::uint64_t>(parse_int(value, key));
      else if (key == "repeats")
        cfg.repeats = static_cast<int>(parse_int(value, key));
      else if (key == "gamma")
        cfg.gamma = parse_double(value, key);
      else if (key == "out")
        cfg.out = value;
      else if (key == "normalize_features")
        cfg.normalize_features = parse_bool(value, key);
      else if (key == "timing")
        cfg.timing = parse_bool(value, key);
      else if (key == "variant") {
        if (value == "samme")
          cfg.variant = BoostVariant::kSamme;
        else if (value == "samme.r")
          cfg.variant = BoostVariant::kSammeR;
        else
          throw InputError("variant must be samme or samme.r, got '" + value +
                           "'");
      } else if (key == "edges")
        cfg.edges_path = value;
      else if (key == "nodes")
        cfg.nodes_path = value;
      else if (key == "sbm_preset") {
        if (value == "reference")
          cfg.sbm = reference_sbm(cfg.sbm.seed);
        else if (value == "xor")
          cfg.sbm = xor_sbm(cfg.sbm.seed);
        else
          throw InputError("sbm_preset must be reference or xor, got '" +
                           value + "'");
        cfg.sbm_preset = value;
      } else if (key == "sbm_blocks")
        cfg.sbm.blocks = static_cast<int>(parse_int(value, key));
      else if (key == "sbm_nodes_per_block")
        cfg.sbm.nodes_per_block = static_cast<int>(parse_int(value, key));
      else if (key == "sbm_p_in")
        cfg.sbm.p_in = parse_double(value, key);
      else if (key == "sbm_p_out")
        cfg.sbm.p_out = parse_double(value, key);
      else if (key == "sbm_feature_dim")
        cfg.sbm.feature_dim = static_cast<int>(parse_int(value, key));
      else if (key == "sbm_feature_signal")
        cfg.sbm.feature_signal = parse_double(value, key);
      else if (key == "sbm_noise_sd")
        cfg.sbm.noise_sd = parse_double(value, key);
      else if (key == "sbm_xor_labels")
        cfg.sbm.xor_labels = parse_bool(value, key);
      else if (key == "train_per_class")
        cfg.split.train_per_class = static_cast<int>(parse_int(value, key));
      else if (key == "val_size")
        cfg.split.val_size = static_cast<int>(parse_int(value, key));
      else if (key == "bench_epochs")
        cfg.bench_epochs = static_cast<int>(parse_int(value, key));
      else if (key == "bench_reps")
        cfg.bench_reps = static_cast<int>(parse_int(value, key));
      else if (key == "sweep_models")
        cfg.sweep_models = split_list(value);
      else
        throw InputError("unknown config key '" + key + "'");
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace adagcn

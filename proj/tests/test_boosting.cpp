#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "adagcn/boosting.hpp"
#include "adagcn/data.hpp"
#include "adagcn/graph.hpp"
#include "adagcn/matrix.hpp"
#include "adagcn/rng.hpp"

using adagcn::AdaGcnConfig;
using adagcn::BoostVariant;
using adagcn::DenseMatrix;
using adagcn::Ensemble;
using adagcn::Rng;

namespace {

double sum(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0);
}

// Small two-cluster dataset plus a propagated chain for driver tests.
struct Toy {
  std::vector<DenseMatrix> chain;
  std::vector<int> labels;
  std::vector<std::uint32_t> train, val;
  int num_classes = 2;
};

Toy make_toy(int depth, std::uint64_t seed) {
  adagcn::SbmConfig sc;
  sc.blocks = 2;
  sc.nodes_per_block = 30;
  sc.p_in = 0.2;
  sc.p_out = 0.01;
  sc.feature_dim = 8;
  sc.feature_signal = 1.0;
  sc.seed = seed;
  adagcn::Dataset ds = adagcn::generate_sbm(sc);
  adagcn::SplitSpec sp;
  sp.train_per_class = 10;
  sp.val_size = 20;
  sp.seed = seed;
  adagcn::Split split = adagcn::make_split(ds, sp);

  Toy t;
  t.labels = ds.labels;
  t.train = split.train;
  t.val = split.val;
  t.chain = adagcn::propagate_chain(adagcn::sym_normalize(ds.adjacency),
                                    ds.features, depth);
  return t;
}

AdaGcnConfig toy_config(int depth, BoostVariant variant) {
  AdaGcnConfig cfg;
  cfg.depth = depth;
  cfg.variant = variant;
  cfg.train.hidden = 8;
  cfg.train.max_epochs = 40;
  cfg.train.patience = 40;
  cfg.train.seed = 3;
  return cfg;
}

}  // namespace

TEST_CASE("samme_alpha closed-form values") {
  // err = 1/2 on a binary problem carries no information: alpha = 0.
  CHECK(adagcn::samme_alpha(0.5, 2) == doctest::Approx(0.0).epsilon(1e-12));
  // err at the random-guess rate (K-1)/K also gives alpha = 0.
  CHECK(adagcn::samme_alpha(2.0 / 3.0, 3) ==
        doctest::Approx(0.0).epsilon(1e-12));
  // err = 1/3, K = 3: log(2) + log(2) = log 4.
  CHECK(adagcn::samme_alpha(1.0 / 3.0, 3) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));
  // Clamped endpoints stay finite.
  CHECK(std::isfinite(adagcn::samme_alpha(0.0, 3)));
  CHECK(std::isfinite(adagcn::samme_alpha(1.0, 3)));
  CHECK(adagcn::samme_alpha(0.0, 3) > 0.0);
  CHECK(adagcn::samme_alpha(1.0, 3) < 0.0);
}

TEST_CASE("weighted_error hand example") {
  std::vector<int> pred = {0, 1, 0};
  std::vector<int> truth = {0, 1, 1};
  std::vector<double> w = {0.2, 0.3, 0.5};
  CHECK(adagcn::weighted_error(pred, truth, w) == doctest::Approx(0.5));
  std::vector<double> unnorm = {2.0, 3.0, 5.0};  // scale must not matter
  CHECK(adagcn::weighted_error(pred, truth, unnorm) == doctest::Approx(0.5));
}

TEST_CASE("samme_update_weights hand example") {
  // Uniform 1/4 weights, one mistake, alpha = log 2. The wrong sample's
  // weight doubles to 1/2; total 1/2 + 3/4 = 5/4; normalized: 2/5, 1/5 x3.
  std::vector<double> w(4, 0.25);
  std::vector<int> pred = {1, 0, 0, 0};
  std::vector<int> truth = {0, 0, 0, 0};
  adagcn::samme_update_weights(w, pred, truth, std::log(2.0));
  CHECK(w[0] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(w[3] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(sum(w) == doctest::Approx(1.0).epsilon(1e-12));

  // alpha from the matching error rate: err = 1/4, K = 3 -> alpha = log 6.
  // Wrong weight 1/4 * 6 = 3/2; total 9/4; normalized: 2/3 and 1/9 each.
  std::vector<double> w2(4, 0.25);
  adagcn::samme_update_weights(w2, pred, truth,
                               adagcn::samme_alpha(0.25, 3));
  CHECK(w2[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(w2[1] == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("all-correct predictions leave weights unchanged") {
  std::vector<double> w = {0.1, 0.4, 0.5};
  std::vector<int> y = {0, 1, 2};
  adagcn::samme_update_weights(w, y, y, 1.7);
  CHECK(w[0] == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sammer_h on a known probability row") {
  // p = (1/2, 1/4, 1/4), K = 3: mean log p = -5 log2 / 3,
  // h = (4 log2/3, -2 log2/3, -2 log2/3) ~ (0.9242, -0.4621, -0.4621).
  std::vector<double> probs = {0.5, 0.25, 0.25};
  auto h = adagcn::sammer_h_row(probs);
  REQUIRE(h.size() == 3);
  const double l2 = std::log(2.0);
  CHECK(h[0] == doctest::Approx(4.0 * l2 / 3.0).epsilon(1e-12));
  CHECK(h[1] == doctest::Approx(-2.0 * l2 / 3.0).epsilon(1e-12));
  CHECK(h[2] == doctest::Approx(-2.0 * l2 / 3.0).epsilon(1e-12));
  CHECK(h[0] + h[1] + h[2] == doctest::Approx(0.0).epsilon(1e-12));

  DenseMatrix pm(1, 3);
  pm.data = probs;
  DenseMatrix hm = adagcn::sammer_h(pm);
  CHECK(hm(0, 0) == doctest::Approx(h[0]).epsilon(1e-14));
  CHECK(hm(0, 1) == doctest::Approx(h[1]).epsilon(1e-14));
}

TEST_CASE("sammer_h rows always sum to zero, even with clamped zeros") {
  Rng rng(6);
  DenseMatrix probs(20, 4);
  for (std::size_t i = 0; i < probs.rows; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < probs.cols; ++j) {
      probs(i, j) = rng.uniform();
      total += probs(i, j);
    }
    for (std::size_t j = 0; j < probs.cols; ++j) probs(i, j) /= total;
  }
  probs(0, 0) = 0.0;  // exercises the log clamp
  probs(0, 1) = 1.0;
  probs(0, 2) = 0.0;
  probs(0, 3) = 0.0;
  DenseMatrix h = adagcn::sammer_h(probs);
  for (std::size_t i = 0; i < h.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < h.cols; ++j) s += h(i, j);
    CHECK(std::abs(s) < 1e-9);
  }
}

TEST_CASE("sammer_update_weights matches an independent transcription") {
  DenseMatrix probs(2, 2);
  probs.data = {0.8, 0.2, 0.5, 0.5};
  std::vector<int> labels = {0, 1};
  std::vector<double> w = {0.5, 0.5};
  adagcn::sammer_update_weights(w, probs, labels);
  // factor_i = exp(-((K-1)/K) log p_{i,y_i}) = p^{-1/2} for K = 2.
  double f0 = std::pow(0.8, -0.5), f1 = std::pow(0.5, -0.5);
  double z = 0.5 * f0 + 0.5 * f1;
  CHECK(w[0] == doctest::Approx(0.5 * f0 / z).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(0.5 * f1 / z).epsilon(1e-12));
  CHECK(sum(w) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sammer weight update brute force on a 6-sample table") {
  DenseMatrix probs(6, 3);
  probs.data = {0.7,  0.2,  0.1,
                0.1,  0.6,  0.3,
                0.25, 0.25, 0.5,
                0.05, 0.9,  0.05,
                0.55, 0.15, 0.3,
                0.34, 0.33, 0.33};
  std::vector<int> labels = {0, 1, 2, 0, 2, 1};

  std::vector<double> lib(6, 1.0 / 6.0);
  adagcn::sammer_update_weights(lib, probs, labels);

  // Independent scalar transcription of the update rule.
  std::vector<double> brute(6, 1.0 / 6.0);
  const double k = 3.0;
  double total = 0.0;
  for (std::size_t i = 0; i < 6; ++i) {
    double p = probs(i, static_cast<std::size_t>(labels[i]));
    brute[i] *= std::exp(-((k - 1.0) / k) * std::log(std::max(p, 1e-10)));
    total += brute[i];
  }
  for (auto& v : brute) v /= total;

  for (std::size_t i = 0; i < 6; ++i)
    CHECK(std::abs(lib[i] - brute[i]) < 1e-12);
}

TEST_CASE("boosting weights stay a distribution over repeated rounds") {
  Rng rng(12);
  const std::size_t n = 25;
  const int k = 4;
  std::vector<int> truth(n);
  for (auto& t : truth) t = static_cast<int>(rng.below(k));

  SUBCASE("samme") {
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    for (int round = 0; round < 8; ++round) {
      std::vector<int> pred(n);
      for (auto& p : pred) p = static_cast<int>(rng.below(k));
      double err = adagcn::weighted_error(pred, truth, w);
      adagcn::samme_update_weights(w, pred, truth,
                                   adagcn::samme_alpha(err, k));
      CHECK(std::abs(sum(w) - 1.0) < 1e-12);
      for (double v : w) CHECK(v >= 0.0);
    }
  }
  SUBCASE("samme.r") {
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    for (int round = 0; round < 8; ++round) {
      DenseMatrix probs(n, k);
      for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (int j = 0; j < k; ++j) {
          probs(i, static_cast<std::size_t>(j)) = 0.05 + rng.uniform();
          total += probs(i, static_cast<std::size_t>(j));
        }
        for (int j = 0; j < k; ++j)
          probs(i, static_cast<std::size_t>(j)) /= total;
      }
      adagcn::sammer_update_weights(w, probs, truth);
      CHECK(std::abs(sum(w) - 1.0) < 1e-12);
      for (double v : w) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("run_adagcn builds depth+1 layers and tracks stats") {
  Toy toy = make_toy(2, 1);
  AdaGcnConfig cfg = toy_config(2, BoostVariant::kSammeR);
  Ensemble ens =
      adagcn::run_adagcn(toy.chain, toy.labels, toy.num_classes, toy.train,
                         toy.val, cfg);
  REQUIRE(ens.layers.size() == 3);
  REQUIRE(ens.stats.size() == 3);
  CHECK(ens.num_classes == 2);
  for (std::size_t l = 0; l < 3; ++l) {
    CHECK(ens.stats[l].layer == static_cast<int>(l));
    CHECK(ens.stats[l].epochs_run >= 1);
    CHECK(ens.stats[l].val_acc >= 0.0);
    CHECK(ens.stats[l].val_acc <= 1.0);
  }
  auto pred = adagcn::ensemble_predict(ens, toy.chain);
  REQUIRE(pred.size() == toy.labels.size());
  // Well-separated two-block toy graph: the ensemble should do far better
  // than chance on its own training nodes.
  std::vector<int> train_pred, train_truth;
  for (auto i : toy.train) {
    train_pred.push_back(pred[i]);
    train_truth.push_back(toy.labels[i]);
  }
  CHECK(adagcn::accuracy(train_pred, train_truth) > 0.9);
}

TEST_CASE("depth 0 ensemble predicts like its single base classifier") {
  Toy toy = make_toy(0, 2);
  AdaGcnConfig cfg = toy_config(0, BoostVariant::kSammeR);
  Ensemble ens =
      adagcn::run_adagcn(toy.chain, toy.labels, toy.num_classes, toy.train,
                         toy.val, cfg);
  REQUIRE(ens.layers.size() == 1);
  // argmax of h equals argmax of the probabilities (monotone transform),
  // so the one-layer ensemble must agree with the raw classifier.
  auto ens_pred = adagcn::ensemble_predict(ens, toy.chain);
  auto base_pred = adagcn::argmax_rows(adagcn::softmax_rows(
      adagcn::mlp_forward(ens.layers[0].params, toy.chain[0])));
  CHECK(ens_pred == base_pred);
}

TEST_CASE("samme variant records errors below chance and positive alphas") {
  Toy toy = make_toy(3, 3);
  AdaGcnConfig cfg = toy_config(3, BoostVariant::kSamme);
  Ensemble ens =
      adagcn::run_adagcn(toy.chain, toy.labels, toy.num_classes, toy.train,
                         toy.val, cfg);
  REQUIRE(ens.stats.size() == 4);
  // On this easy 2-class toy the base classifiers beat chance, so every
  // weighted error sits below 1/2 and every alpha is positive.
  for (const auto& st : ens.stats) {
    CHECK(st.weighted_err < 0.5);
    CHECK(st.alpha > 0.0);
  }
  for (const auto& layer : ens.layers) CHECK(layer.alpha > 0.0);
}

TEST_CASE("scaling all samme alphas leaves the argmax unchanged") {
  Toy toy = make_toy(2, 4);
  AdaGcnConfig cfg = toy_config(2, BoostVariant::kSamme);
  Ensemble ens =
      adagcn::run_adagcn(toy.chain, toy.labels, toy.num_classes, toy.train,
                         toy.val, cfg);
  auto before = adagcn::ensemble_predict(ens, toy.chain);
  for (auto& layer : ens.layers) layer.alpha *= 3.5;
  auto after = adagcn::ensemble_predict(ens, toy.chain);
  CHECK(before == after);
}

TEST_CASE("samme.r ensemble scores rows sum to zero") {
  Toy toy = make_toy(2, 5);
  AdaGcnConfig cfg = toy_config(2, BoostVariant::kSammeR);
  Ensemble ens =
      adagcn::run_adagcn(toy.chain, toy.labels, toy.num_classes, toy.train,
                         toy.val, cfg);
  DenseMatrix scores = adagcn::ensemble_scores(ens, toy.chain);
  REQUIRE(scores.rows == toy.labels.size());
  for (std::size_t i = 0; i < scores.rows; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < scores.cols; ++j) s += scores(i, j);
    CHECK(std::abs(s) < 1e-9);
  }
}

TEST_CASE("run_adagcn is deterministic for a fixed seed") {
  Toy toy = make_toy(2, 6);
  AdaGcnConfig cfg = toy_config(2, BoostVariant::kSammeR);
  Ensemble a = adagcn::run_adagcn(toy.chain, toy.labels, toy.num_classes,
                                  toy.train, toy.val, cfg);
  Ensemble b = adagcn::run_adagcn(toy.chain, toy.labels, toy.num_classes,
                                  toy.train, toy.val, cfg);
  REQUIRE(a.layers.size() == b.layers.size());
  for (std::size_t l = 0; l < a.layers.size(); ++l) {
    CHECK(adagcn::ops::max_abs_diff(a.layers[l].params.w0,
                               b.layers[l].params.w0) == 0.0);
    CHECK(adagcn::ops::max_abs_diff(a.layers[l].params.w1,
                               b.layers[l].params.w1) == 0.0);
  }
  CHECK(adagcn::ensemble_predict(a, toy.chain) ==
        adagcn::ensemble_predict(b, toy.chain));
}

TEST_CASE("run_adagcn validates the chain length") {
  Toy toy = make_toy(2, 7);
  AdaGcnConfig cfg = toy_config(3, BoostVariant::kSammeR);  // expects 4 mats
  CHECK_THROWS(adagcn::run_adagcn(toy.chain, toy.labels, toy.num_classes,
                                  toy.train, toy.val, cfg));
}

TEST_CASE("vc_depth_bound closed form and monotonicity") {
  // d = 3, L = 1: 2 * 4 * 2 * log2(2e) = 16 log2(2e).
  const double e = std::exp(1.0);
  CHECK(adagcn::vc_depth_bound(3, 1) ==
        doctest::Approx(16.0 * std::log2(2.0 * e)).epsilon(1e-12));
  double prev = -1.0;
  for (int depth = 0; depth <= 50; ++depth) {
    double v = adagcn::vc_depth_bound(3, depth);
    CHECK(v > prev);
    prev = v;
  }
  // Also grows with the vote dimension.
  CHECK(adagcn::vc_depth_bound(5, 4) > adagcn::vc_depth_bound(3, 4));
}

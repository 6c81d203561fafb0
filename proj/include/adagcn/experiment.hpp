#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adagcn/boosting.hpp"
#include "adagcn/data.hpp"
#include "adagcn/mlp.hpp"

namespace adagcn {

// Per-model training hyperparameters (seed is filled in per run).
struct ModelConfigs {
  TrainConfig adagcn, adasgc, gcn, gcn_res, sgc, appnp;
  ModelConfigs();
};

struct ExperimentConfig {
  std::string model = "adagcn";
  int depth = 5;
  std::vector<int> depths;  // depth-sweep / bench x-axis
  std::uint64_t seed = 0;
  int repeats = 5;
  double gamma = 0.1;      // appnp teleport factor
  std::string out;         // CSV path; empty = stdout
  bool normalize_features = false;
  bool timing = false;     // fill wall-time CSV columns (off keeps CSV
                           // byte-identical across thread counts)
  BoostVariant variant = BoostVariant::kSammeR;

  // Dataset source: files when both paths set, otherwise a generated SBM.
  std::string edges_path, nodes_path;
  std::string sbm_preset = "reference";  // reference | xor
  SbmConfig sbm;
  SplitSpec split;  // defaults: 20 per class, val 100

  ModelConfigs models;
  std::vector<std::string> sweep_models;  // depth-sweep model list
  int bench_epochs = 200;
  int bench_reps = 3;  // timed repetitions per point; min is reported
};

struct RunRecord {
  std::string model;
  int depth = 0;
  std::uint64_t seed = 0;
  double train_acc = 0.0, val_acc = 0.0, test_acc = 0.0;
  int epochs = 0;           // total training epochs across layers
  long sparse_ops = 0;      // sparse products performed by the whole run
  double propagate_ms = -1.0;  // one-time propagation cost (timing only)
  double per_epoch_ms = -1.0;  // mean epoch wall time (timing only)
  std::vector<double> alphas, errs;  // per boosting layer (boosted models)
};

// Train + evaluate one model at one depth with one seed. For generated
// datasets the SBM, the split, and the initialization all derive from seed.
RunRecord run_single(const ExperimentConfig& cfg, const std::string& model,
                     int depth, std::uint64_t seed, bool timed = false);

// key = value config file with [model] sections; unknown keys are errors.
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

int cmd_train(const ExperimentConfig& cfg);
int cmd_depth_sweep(const ExperimentConfig& cfg);
int cmd_bench(const ExperimentConfig& cfg);
int cmd_verify(const ExperimentConfig& cfg);
int cmd_gen_sbm(const ExperimentConfig& cfg, const std::string& out_prefix);

}  // namespace adagcn

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adagcn/data.hpp"
#include "adagcn/errors.hpp"
#include "adagcn/experiment.hpp"

namespace {

struct CliValues {
  std::string config, model, out, edges, nodes, preset, variant, depths;
  std::vector<std::string> sweep_models;
  int depth = 0, repeats = 0, train_per_class = 0, val_size = 0,
      bench_epochs = 0;
  std::uint64_t seed = 0;
  double gamma = 0.0;
};

void add_common(CLI::App* sub, CliValues& v) {
  sub->add_option("--config", v.config, "key = value config file");
  sub->add_option("--model", v.model,
                  "adagcn, adasgc, gcn, gcn_res, sgc, or appnp");
  sub->add_option("--depth", v.depth,
                  "propagation depth L (power-iteration steps for appnp)");
  sub->add_option("--depths", v.depths, "comma-separated depth list");
  sub->add_option("--seed", v.seed, "base RNG seed");
  sub->add_option("--repeats", v.repeats, "independent runs per setting");
  sub->add_option("--gamma", v.gamma, "teleport factor for appnp/ppnp");
  sub->add_option("--out", v.out, "output CSV path (default stdout)");
  sub->add_flag("--normalize-features", "L1-normalize feature rows");
  sub->add_flag("--timing", "fill wall-time CSV columns");
  sub->add_option("--edges", v.edges, "edge-list file (with --nodes)");
  sub->add_option("--nodes", v.nodes, "node TSV file (with --edges)");
  sub->add_option("--train-per-class", v.train_per_class,
                  "training nodes drawn per class");
  sub->add_option("--val-size", v.val_size, "early-stopping set size");
  sub->add_option("--variant", v.variant, "boosting variant: samme | samme.r");
  sub->add_option("--preset", v.preset, "SBM preset: reference | xor");
}

adagcn::ExperimentConfig build_config(const CLI::App* sub,
                                      const CliValues& v) {
  auto seen = [sub](const std::string& name) {
    const CLI::Option* o = sub->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  adagcn::ExperimentConfig cfg;
  if (seen("--config")) adagcn::apply_config_file(cfg, v.config);
  if (seen("--model")) cfg.model = v.model;
  if (seen("--depth")) cfg.depth = v.depth;
  if (seen("--depths")) {
    cfg.depths.clear();
    std::stringstream ss(v.depths);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) {
        try {
          cfg.depths.push_back(std::stoi(item));
        } catch (const std::exception&) {
          throw adagcn::InputError("--depths: '" + item +
                                   "' is not an integer");
        }
      }
  }
  if (seen("--seed")) cfg.seed = v.seed;
  if (seen("--repeats")) cfg.repeats = v.repeats;
  if (seen("--gamma")) cfg.gamma = v.gamma;
  if (seen("--out")) cfg.out = v.out;
  if (seen("--normalize-features")) cfg.normalize_features = true;
  if (seen("--timing")) cfg.timing = true;
  if (seen("--edges")) cfg.edges_path = v.edges;
  if (seen("--nodes")) cfg.nodes_path = v.nodes;
  if (seen("--train-per-class"))
    cfg.split.train_per_class = v.train_per_class;
  if (seen("--val-size")) cfg.split.val_size = v.val_size;
  if (seen("--variant")) {
    if (v.variant == "samme")
      cfg.variant = adagcn::BoostVariant::kSamme;
    else if (v.variant == "samme.r")
      cfg.variant = adagcn::BoostVariant::kSammeR;
    else
      throw adagcn::InputError("--variant must be samme or samme.r");
  }
  if (seen("--preset")) {
    if (v.preset == "reference")
      cfg.sbm = adagcn::reference_sbm(0);
    else if (v.preset == "xor")
      cfg.sbm = adagcn::xor_sbm(0);
    else
      throw adagcn::InputError("--preset must be reference or xor");
    cfg.sbm_preset = v.preset;
  }
  if (seen("--models")) cfg.sweep_models = v.sweep_models;
  if (seen("--bench-epochs")) cfg.bench_epochs = v.bench_epochs;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AdaGCN: AdaBoosted graph convolutional networks"};
  app.require_subcommand(1);
  CliValues v;

  CLI::App* train = app.add_subcommand(
      "train", "train one model, repeated over seeds, and write a CSV");
  add_common(train, v);

  CLI::App* sweep = app.add_subcommand(
      "depth-sweep", "accuracy vs depth for several models");
  add_common(sweep, v);
  sweep->add_option("--models", v.sweep_models,
                    "models to sweep (default gcn,gcn_res,sgc,adagcn)")
      ->delimiter(',');

  CLI::App* bench = app.add_subcommand(
      "bench", "per-epoch training time vs depth with fitted slopes");
  add_common(bench, v);
  bench->add_option("--bench-epochs", v.bench_epochs,
                    "fixed epochs per timed training run");

  CLI::App* verify = app.add_subcommand(
      "verify", "run the proposition, gradient, and boosting checks");
  verify->add_option("--config", v.config, "key = value config file");

  CLI::App* gen = app.add_subcommand(
      "gen-sbm", "generate an SBM dataset as PREFIX.edges / PREFIX.nodes");
  add_common(gen, v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const CLI::App* active = app.get_subcommands().front();
    adagcn::ExperimentConfig cfg = build_config(active, v);
    if (active == train) return adagcn::cmd_train(cfg);
    if (active == sweep) return adagcn::cmd_depth_sweep(cfg);
    if (active == bench) return adagcn::cmd_bench(cfg);
    if (active == verify) return adagcn::cmd_verify(cfg);
    if (active == gen) return adagcn::cmd_gen_sbm(cfg, cfg.out);
  } catch (const adagcn::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

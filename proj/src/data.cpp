#include "adagcn/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "adagcn/errors.hpp"
#include "adagcn/rng.hpp"

namespace adagcn {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t tab = line.find('\t', start);
    if (tab == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

double parse_feature(const std::string& tok, const std::string& path,
                     std::size_t lineno) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw InputError(path + ":" + std::to_string(lineno) +
                     ": non-numeric feature '" + tok + "'");
  }
}

}  // namespace

Dataset load_dataset(const std::string& edge_path,
                     const std::string& node_path) {
  std::ifstream nf(node_path);
  if (!nf) throw InputError("cannot open node file: " + node_path);

  Dataset ds;
  std::unordered_map<std::string, std::uint32_t> node_index;
  std::unordered_map<std::string, int> label_index;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t feature_dim = 0;

  while (std::getline(nf, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> tok = split_tabs(line);
    if (tok.size() < 2)
      throw InputError(node_path + ":" + std::to_string(lineno) +
                       ": expected node_id<TAB>label<TAB>features");
    if (rows.empty()) {
      feature_dim = tok.size() - 2;
    } else if (tok.size() - 2 != feature_dim) {
      throw InputError(node_path + ":" + std::to_string(lineno) +
                       ": ragged feature row (expected " +
                       std::to_string(feature_dim) + " features, got " +
                       std::to_string(tok.size() - 2) + ")");
    }
    if (!node_index.emplace(tok[0], static_cast<std::uint32_t>(rows.size()))
             .second)
      throw InputError(node_path + ":" + std::to_string(lineno) +
                       ": duplicate node id '" + tok[0] + "'");
    auto [it, fresh] =
        label_index.emplace(tok[1], static_cast<int>(label_index.size()));
    if (fresh) ds.label_names.push_back(tok[1]);
    ds.labels.push_back(it->second);
    std::vector<double> feats(feature_dim);
    for (std::size_t c = 0; c < feature_dim; ++c)
      feats[c] = parse_feature(tok[c + 2], node_path, lineno);
    rows.push_back(std::move(feats));
  }
  if (rows.empty()) throw InputError(node_path + ": no nodes");

  const std::size_t n = rows.size();
  ds.features = DenseMatrix(n, feature_dim);
  for (std::size_t i = 0; i < n; ++i)
    std::copy(rows[i].begin(), rows[i].end(), ds.features.row(i));
  ds.num_classes = static_cast<int>(label_index.size());

  std::ifstream ef(edge_path);
  if (!ef) throw InputError("cannot open edge file: " + edge_path);
  EdgeList edges;
  lineno = 0;
  while (std::getline(ef, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string a, b;
    if (!(ss >> a >> b))
      throw InputError(edge_path + ":" + std::to_string(lineno) +
                       ": expected two node ids");
    auto ia = node_index.find(a);
    auto ib = node_index.find(b);
    if (ia == node_index.end() || ib == node_index.end())
      throw InputError(edge_path + ":" + std::to_string(lineno) +
                       ": edge references unknown node id '" +
                       (ia == node_index.end() ? a : b) + "'");
    edges.emplace_back(ia->second, ib->second);
  }
  ds.adjacency = build_from_edge_list(n, edges);
  return ds;
}

void save_dataset(const Dataset& ds, const std::string& edge_path,
                  const std::string& node_path) {
  std::ofstream nf(node_path);
  if (!nf) throw InputError("cannot write node file: " + node_path);
  char buf[40];
  for (std::size_t i = 0; i < ds.adjacency.n; ++i) {
    nf << i << '\t'
       << ds.label_names[static_cast<std::size_t>(ds.labels[i])];
    for (std::size_t c = 0; c < ds.features.cols; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", ds.features(i, c));
      nf << '\t' << buf;
    }
    nf << '\n';
  }

  std::ofstream ef(edge_path);
  if (!ef) throw InputError("cannot write edge file: " + edge_path);
  ef << "# " << ds.adjacency.n << " nodes\n";
  for (std::size_t i = 0; i < ds.adjacency.n; ++i)
    for (std::size_t e = ds.adjacency.row_ptr[i];
         e < ds.adjacency.row_ptr[i + 1]; ++e)
      if (ds.adjacency.col_idx[e] > i)
        ef << i << ' ' << ds.adjacency.col_idx[e] << '\n';
}

Dataset generate_sbm(const SbmConfig& cfg) {
  if (cfg.blocks < 1 || cfg.nodes_per_block < 1 || cfg.feature_dim < 1)
    throw InputError("generate_sbm: blocks, block size, feature_dim >= 1");
  if (!(cfg.p_out >= 0.0 && cfg.p_out < cfg.p_in && cfg.p_in <= 1.0))
    throw InputError("generate_sbm: need 0 <= p_out < p_in <= 1");
  if (cfg.xor_labels && cfg.blocks % 2 != 0)
    throw InputError("generate_sbm: xor labels need an even block count");

  const std::size_t n =
      static_cast<std::size_t>(cfg.blocks) *
      static_cast<std::size_t>(cfg.nodes_per_block);
  Rng rng(cfg.seed);
  Rng edge_rng = rng.fork(1);
  Rng feat_rng = rng.fork(2);

  auto block_of = [&](std::size_t i) {
    return static_cast<int>(i / static_cast<std::size_t>(cfg.nodes_per_block));
  };

  EdgeList edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double p = block_of(i) == block_of(j) ? cfg.p_in : cfg.p_out;
      if (edge_rng.uniform() < p)
        edges.emplace_back(static_cast<std::uint32_t>(i),
                           static_cast<std::uint32_t>(j));
    }

  Dataset ds;
  ds.adjacency = build_from_edge_list(n, edges);
  ds.features = DenseMatrix(n, static_cast<std::size_t>(cfg.feature_dim));
  ds.labels.resize(n);

  const auto c = static_cast<std::size_t>(cfg.feature_dim);
  for (std::size_t i = 0; i < n; ++i) {
    const int b = block_of(i);
    if (cfg.xor_labels) {
      const int bit1 = b & 1;
      const int bit2 = (b >> 1) & 1;
      ds.labels[i] = bit1 ^ bit2;
      const double s1 = bit1 ? 1.0 : -1.0;
      const double s2 = bit2 ? 1.0 : -1.0;
      // First half: pure noise. Third quarter carries bit 1, last quarter
      // carries bit 2 — the label is their xor, which no single linear
      // combination of the features can express.
      for (std::size_t d = 0; d < c; ++d) {
        double mean = 0.0;
        if (d >= c / 2 && d < 3 * c / 4)
          mean = s1 * cfg.feature_signal;
        else if (d >= 3 * c / 4)
          mean = s2 * cfg.feature_signal;
        ds.features(i, d) = mean + cfg.noise_sd * feat_rng.normal();
      }
    } else {
      ds.labels[i] = b;
      for (std::size_t d = 0; d < c; ++d) {
        double mean = static_cast<int>(d) % cfg.blocks == b
                          ? cfg.feature_signal
                          : 0.0;
        ds.features(i, d) = mean + cfg.noise_sd * feat_rng.normal();
      }
    }
  }
  ds.num_classes = cfg.xor_labels ? 2 : cfg.blocks;
  for (int l = 0; l < ds.num_classes; ++l)
    ds.label_names.push_back(std::to_string(l));
  return ds;
}

SbmConfig reference_sbm(std::uint64_t seed) {
  SbmConfig cfg;
  cfg.seed = seed;
  return cfg;
}

SbmConfig xor_sbm(std::uint64_t seed) {
  SbmConfig cfg;
  cfg.feature_signal = 1.0;
  cfg.seed = seed;
  cfg.xor_labels = true;
  return cfg;
}

Split make_split(const Dataset& ds, const SplitSpec& spec) {
  const std::size_t n = ds.adjacency.n;
  if (spec.train_per_class < 1 || spec.val_size < 0)
    throw InputError("make_split: invalid sizes");
  Rng rng(spec.seed);
  Split split;
  std::vector<bool> taken(n, false);

  for (int c = 0; c < ds.num_classes; ++c) {
    std::vector<std::uint32_t> pool;
    for (std::size_t i = 0; i < n; ++i)
      if (ds.labels[i] == c) pool.push_back(static_cast<std::uint32_t>(i));
    if (pool.size() < static_cast<std::size_t>(spec.train_per_class))
      throw InputError("make_split: class " + std::to_string(c) + " has " +
                       std::to_string(pool.size()) + " nodes, need " +
                       std::to_string(spec.train_per_class));
    for (int t = 0; t < spec.train_per_class; ++t) {
      std::size_t j = static_cast<std::size_t>(t) +
                      rng.below(pool.size() - static_cast<std::size_t>(t));
      std::swap(pool[static_cast<std::size_t>(t)], pool[j]);
      split.train.push_back(pool[static_cast<std::size_t>(t)]);
      taken[pool[static_cast<std::size_t>(t)]] = true;
    }
  }

  std::vector<std::uint32_t> rest;
  for (std::size_t i = 0; i < n; ++i)
    if (!taken[i]) rest.push_back(static_cast<std::uint32_t>(i));
  if (rest.size() < static_cast<std::size_t>(spec.val_size))
    throw InputError("make_split: only " + std::to_string(rest.size()) +
                     " nodes left for a validation set of " +
                     std::to_string(spec.val_size));
  for (int t = 0; t < spec.val_size; ++t) {
    std::size_t j = static_cast<std::size_t>(t) +
                    rng.below(rest.size() - static_cast<std::size_t>(t));
    std::swap(rest[static_cast<std::size_t>(t)], rest[j]);
    split.val.push_back(rest[static_cast<std::size_t>(t)]);
  }
  split.test.assign(rest.begin() + spec.val_size, rest.end());

  std::sort(split.train.begin(), split.train.end());
  std::sort(split.val.begin(), split.val.end());
  std::sort(split.test.begin(), split.test.end());
  split.label_rate =
      static_cast<double>(split.train.size()) / static_cast<double>(n);
  return split;
}

void l1_normalize_rows(DenseMatrix& x) {
  for (std::size_t i = 0; i < x.rows; ++i) {
    double* r = x.row(i);
    double sum = 0.0;
    for (std::size_t j = 0; j < x.cols; ++j) sum += std::abs(r[j]);
    if (sum > 0.0)
      for (std::size_t j = 0; j < x.cols; ++j) r[j] /= sum;
  }
}

}  // namespace adagcn

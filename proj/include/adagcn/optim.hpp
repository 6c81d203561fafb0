#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace adagcn {

// Adam state for one parameter tensor.
struct AdamState {
  std::vector<double> m, v;
  long t = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

struct AdamConfig {
  double lr = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // decoupled, applied after the Adam update
};

inline void adam_step(std::span<double> p, std::span<const double> g,
                      AdamState& st, const AdamConfig& cfg) {
  ++st.t;
  const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(st.t));
  for (std::size_t i = 0; i < p.size(); ++i) {
    st.m[i] = cfg.beta1 * st.m[i] + (1.0 - cfg.beta1) * g[i];
    st.v[i] = cfg.beta2 * st.v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
    double mhat = st.m[i] / bc1;
    double vhat = st.v[i] / bc2;
    p[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
    if (cfg.weight_decay != 0.0) p[i] -= cfg.lr * cfg.weight_decay * p[i];
  }
}

// Early stopping on validation accuracy, ties broken by lower validation
// loss. update() returns true when this epoch set a new best.
struct EarlyStopper {
  int patience = 0;
  double best_acc = -1.0;
  double best_loss = std::numeric_limits<double>::infinity();
  int epochs_since_best = 0;

  explicit EarlyStopper(int p) : patience(p) {}

  bool update(double val_acc, double val_loss) {
    bool improved = val_acc > best_acc ||
                    (val_acc == best_acc && val_loss < best_loss);
    if (improved) {
      best_acc = val_acc;
      best_loss = val_loss;
      epochs_since_best = 0;
    } else {
      ++epochs_since_best;
    }
    return improved;
  }

  bool should_stop() const { return epochs_since_best >= patience; }
};

}  // namespace adagcn

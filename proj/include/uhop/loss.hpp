#pragma once

#include "uhop/kernel.hpp"

#include <utility>
#include <vector>

namespace uhop {

enum class LossKind { average, maximum, dl_variant };
enum class WeightInit { gaussian, identity_extended };

struct Stage1Config {
  int iters = 0;            // N
  double step_size = 1.0;   // gamma
  double t = 2.0;
  bool line_search = true;
  LossKind loss = LossKind::average;
  int max_halvings = 30;

  // Weight seeding used by the end-to-end drivers; feature_dim 0 picks the
  // default (4d for gaussian, d for identity_extended).
  WeightInit init = WeightInit::gaussian;
  Index feature_dim = 0;
  RowScaling row_scaling = RowScaling::unit_norm;
};

// Log of the mean Gaussian similarity exp(-t|phi(u)-phi(v)|^2) over ordered
// memory pairs u != v. Always <= 0, with 0 attained when all mapped memories
// coincide.
double avg_separation_loss(const FeatureMap& fm, const PatternSet& ps, double t);

// Log-RBF value of the least separated ordered pair.
double max_separation_loss(const FeatureMap& fm, const PatternSet& ps, double t);

// log mean exp(2t(K(u,v)^2 - 1)) over ordered pairs u != v; minimized at -2t
// when all distinct mapped memories are orthogonal with unit norm.
double dl_separation_loss(const FeatureMap& fm, const PatternSet& ps, double t);

double separation_loss(const FeatureMap& fm, const PatternSet& ps, double t, LossKind kind);

// Analytic gradient with respect to W of the selected loss. Ties in the
// maximum loss average the gradients of all argmax pairs.
Matrix loss_gradient(const FeatureMap& fm, const PatternSet& ps, double t, LossKind kind);

// N gradient steps, optionally safeguarded by backtracking halving (a step is
// accepted only if the loss does not increase), then one final row
// normalization. Returns the normalized map and the N+1 loss values along
// the raw trajectory.
std::pair<FeatureMap, std::vector<double>> stage1_optimize(const FeatureMap& fm,
                                                           const PatternSet& ps,
                                                           const Stage1Config& cfg);

// Seeds the Stage-I weight matrix per cfg.init / cfg.feature_dim.
FeatureMap stage1_init(Index d, const Stage1Config& cfg, std::uint64_t seed);

}  // namespace uhop

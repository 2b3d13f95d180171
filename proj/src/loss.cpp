#include "uhop/loss.hpp"

#include <cmath>
#include <limits>

namespace uhop {

namespace {

void require_pairs(const PatternSet& ps) {
  require(ps.count() >= 2, errc::degenerate_set,
          "separation loss needs at least two memories");
}

// Pairwise values ell(mu,nu) over ordered pairs, as a matrix with an unused
// diagonal. For average/maximum this is the log-RBF distance; for the DL
// variant it is 2t(K^2 - 1).
Matrix pair_values(const FeatureMap& fm, const PatternSet& ps, double t, LossKind kind) {
  const Index m = ps.count();
  const Matrix mapped = fm.W * ps.data;  // D_Phi x M
  const Matrix gram = mapped.transpose() * mapped;
  if (kind == LossKind::dl_variant) return 2.0 * t * (gram.array().square() - 1.0);
  Matrix vals(m, m);
  for (Index mu = 0; mu < m; ++mu)
    for (Index nu = 0; nu < m; ++nu)
      vals(mu, nu) = -t * std::max(gram(mu, mu) + gram(nu, nu) - 2.0 * gram(mu, nu), 0.0);
  return vals;
}

double log_mean_exp_offdiag(const Matrix& vals) {
  const Index m = vals.rows();
  double peak = -std::numeric_limits<double>::infinity();
  for (Index mu = 0; mu < m; ++mu)
    for (Index nu = 0; nu < m; ++nu)
      if (nu != mu) peak = std::max(peak, vals(mu, nu));
  double sum = 0.0;
  for (Index mu = 0; mu < m; ++mu)
    for (Index nu = 0; nu < m; ++nu)
      if (nu != mu) sum += std::exp(vals(mu, nu) - peak);
  return peak + std::log(sum / static_cast<double>(m * (m - 1)));
}

}  // namespace

double avg_separation_loss(const FeatureMap& fm, const PatternSet& ps, double t) {
  require_pairs(ps);
  return log_mean_exp_offdiag(pair_values(fm, ps, t, LossKind::average));
}

double max_separation_loss(const FeatureMap& fm, const PatternSet& ps, double t) {
  require_pairs(ps);
  const Matrix vals = pair_values(fm, ps, t, LossKind::maximum);
  const Index m = ps.count();
  double peak = -std::numeric_limits<double>::infinity();
  for (Index mu = 0; mu < m; ++mu)
    for (Index nu = 0; nu < m; ++nu)
      if (nu != mu) peak = std::max(peak, vals(mu, nu));
  return peak;
}

double dl_separation_loss(const FeatureMap& fm, const PatternSet& ps, double t) {
  require_pairs(ps);
  return log_mean_exp_offdiag(pair_values(fm, ps, t, LossKind::dl_variant));
}

double separation_loss(const FeatureMap& fm, const PatternSet& ps, double t, LossKind kind) {
  switch (kind) {
    case LossKind::average: return avg_separation_loss(fm, ps, t);
    case LossKind::maximum: return max_separation_loss(fm, ps, t);
    case LossKind::dl_variant: return dl_separation_loss(fm, ps, t);
  }
  fail(errc::invalid_argument, "separation_loss: unknown kind");
}

Matrix loss_gradient(const FeatureMap& fm, const PatternSet& ps, double t, LossKind kind) {
  require_pairs(ps);
  const Index m = ps.count();
  const Matrix vals = pair_values(fm, ps, t, kind);

  // Pair weights: softmax of the pairwise values for the log-mean-exp
  // losses, a uniform split over argmax pairs for the maximum loss.
  Matrix weights = Matrix::Zero(m, m);
  if (kind == LossKind::maximum) {
    double peak = -std::numeric_limits<double>::infinity();
    for (Index mu = 0; mu < m; ++mu)
      for (Index nu = 0; nu < m; ++nu)
        if (nu != mu) peak = std::max(peak, vals(mu, nu));
    Index ties = 0;
    for (Index mu = 0; mu < m; ++mu)
      for (Index nu = 0; nu < m; ++nu)
        if (nu != mu && vals(mu, nu) == peak) ++ties;
    for (Index mu = 0; mu < m; ++mu)
      for (Index nu = 0; nu < m; ++nu)
        if (nu != mu && vals(mu, nu) == peak)
          weights(mu, nu) = 1.0 / static_cast<double>(ties);
  } else {
    double peak = -std::numeric_limits<double>::infinity();
    for (Index mu = 0; mu < m; ++mu)
      for (Index nu = 0; nu < m; ++nu)
        if (nu != mu) peak = std::max(peak, vals(mu, nu));
    double total = 0.0;
    for (Index mu = 0; mu < m; ++mu)
      for (Index nu = 0; nu < m; ++nu)
        if (nu != mu) {
          weights(mu, nu) = std::exp(vals(mu, nu) - peak);
          total += weights(mu, nu);
        }
    weights /= total;
  }

  // d/dW of -t|W(u-v)|^2 is -2t W (u-v)(u-v)^T; for the DL pair value
  // 2t(K(u,v)^2 - 1) it is 4t K(u,v) W (uv^T + vu^T). Both pair sums
  // collapse into Xi * (M x M coefficient matrix) * Xi^T so the cost stays
  // at a few matrix products instead of M^2 rank-one updates.
  Matrix coeff(m, m);
  if (kind == LossKind::dl_variant) {
    const Matrix mapped = fm.W * ps.data;
    const Matrix gram = mapped.transpose() * mapped;
    const Matrix c = (4.0 * t) * weights.cwiseProduct(gram);
    coeff = c + c.transpose();
  } else {
    const Matrix w_sym = weights + weights.transpose();
    coeff = -2.0 * t * (Matrix(w_sym.rowwise().sum().asDiagonal()) - w_sym);
  }
  return fm.W * (ps.data * coeff * ps.data.transpose());
}

std::pair<FeatureMap, std::vector<double>> stage1_optimize(const FeatureMap& fm,
                                                           const PatternSet& ps,
                                                           const Stage1Config& cfg) {
  require_pairs(ps);
  require(cfg.iters >= 0, errc::invalid_argument, "stage1_optimize: negative iteration count");
  require(cfg.step_size > 0.0, errc::invalid_argument, "stage1_optimize: step size must be positive");

  Matrix w = fm.W;
  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(cfg.iters) + 1);
  double current = separation_loss(FeatureMap(w), ps, cfg.t, cfg.loss);
  history.push_back(current);

  for (int k = 0; k < cfg.iters; ++k) {
    const Matrix grad = loss_gradient(FeatureMap(w), ps, cfg.t, cfg.loss);
    if (!cfg.line_search) {
      w -= cfg.step_size * grad;
      current = separation_loss(FeatureMap(w), ps, cfg.t, cfg.loss);
      history.push_back(current);
      continue;
    }
    double step = cfg.step_size;
    bool accepted = false;
    for (int h = 0; h <= cfg.max_halvings; ++h) {
      const Matrix candidate = w - step * grad;
      const double loss = separation_loss(FeatureMap(candidate), ps, cfg.t, cfg.loss);
      if (loss <= current) {
        w = candidate;
        current = loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    require(accepted, errc::line_search_failure,
            "stage1_optimize: no nonincreasing step after halvings");
    history.push_back(current);
  }

  return {normalize_rows(FeatureMap(std::move(w)), ps, cfg.row_scaling), std::move(history)};
}

FeatureMap stage1_init(Index d, const Stage1Config& cfg, std::uint64_t seed) {
  if (cfg.init == WeightInit::identity_extended) {
    const Index dim = cfg.feature_dim > 0 ? cfg.feature_dim : d;
    return identity_extended(d, dim);
  }
  const Index dim = cfg.feature_dim > 0 ? cfg.feature_dim : 4 * d;
  return init_feature_map(d, dim, seed);
}

}  // namespace uhop

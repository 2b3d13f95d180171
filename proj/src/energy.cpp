#include "uhop/energy.hpp"

#include <cmath>

namespace uhop {

double energy(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
              const Vector& x) {
  const double self = 0.5 * (fm.W * x).squaredNorm();
  const Vector overlap = kernel_overlap(fm, ps, x);
  return self - psi_star(cfg.alpha, cfg.beta, overlap, cfg.bisection_tol, cfg.bisection_max_iter);
}

Vector retrieval_step(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
                      const Vector& x) {
  const Vector weights = cfg.separation()(cfg.beta, kernel_overlap(fm, ps, x));
  return ps.data * weights;
}

RetrievalTrace retrieve(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
                        const Vector& x0) {
  require(cfg.max_iters >= 1, errc::invalid_argument, "retrieve: need at least one step");
  RetrievalTrace trace;
  trace.iterates.push_back(x0);
  trace.energies.push_back(energy(fm, ps, cfg, x0));

  Vector x = x0;
  for (int k = 0; k < cfg.max_iters; ++k) {
    Vector next = retrieval_step(fm, ps, cfg, x);
    const double residual = (next - x).norm();
    trace.iterates.push_back(next);
    trace.energies.push_back(energy(fm, ps, cfg, next));
    trace.residuals.push_back(residual);
    x = std::move(next);
    if (residual < cfg.tol) {
      trace.converged = true;
      break;
    }
  }
  trace.retrieved = x;
  return trace;
}

double error_bound(const SeparationStats& stats, double beta, Index mu) {
  require(beta > 0.0, errc::invalid_argument, "error_bound: beta must be positive");
  const Index m_count = stats.delta.size();
  require(m_count >= 2, errc::degenerate_set, "error_bound: need at least two memories");
  require(mu >= 0 && mu < m_count, errc::index_out_of_range, "error_bound: bad memory index");
  const double exponent = -beta * (stats.delta[mu] - 2.0 * stats.max_norm * stats.radius);
  return 2.0 * stats.max_norm * static_cast<double>(m_count - 1) * std::exp(exponent);
}

double error_bound(const PatternSet& ps, double beta, Index mu) {
  return error_bound(separation_stats(ps), beta, mu);
}

Vector distance_baseline_step(const PatternSet& ps, const RetrievalConfig& cfg, Similarity sim,
                              const Vector& x) {
  require(x.size() == ps.dim(), errc::dimension_mismatch,
          "distance_baseline_step: dimension mismatch");
  Vector scores(ps.count());
  for (Index mu = 0; mu < ps.count(); ++mu) {
    const Vector diff = ps.data.col(mu) - x;
    scores[mu] = sim == Similarity::neg_l2 ? -diff.norm() : -diff.lpNorm<1>();
  }
  return ps.data * cfg.separation()(cfg.beta, scores);
}

}  // namespace uhop

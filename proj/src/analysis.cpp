#include "uhop/analysis.hpp"

#include <cmath>
#include <limits>

namespace uhop {

ExactRetrievalReport check_exact_retrieval(const FeatureMap& fm, const PatternSet& ps,
                                           double alpha, double beta, double t) {
  require(alpha > 1.0 && alpha <= 2.0, errc::alpha_out_of_range,
          "check_exact_retrieval: requires alpha in (1,2]");
  require(beta > 0.0 && t > 0.0, errc::invalid_argument,
          "check_exact_retrieval: beta and t must be positive");

  ExactRetrievalReport report;
  report.alpha = alpha;
  report.beta = beta;
  report.t = t;
  report.threshold = -2.0 * t / (beta * (alpha - 1.0));

  const Matrix mapped = fm.W * ps.data;
  for (Index mu = 0; mu < ps.count(); ++mu) {
    double margin = -std::numeric_limits<double>::infinity();
    for (Index nu = 0; nu < ps.count(); ++nu) {
      if (nu == mu) continue;
      margin = std::max(margin, -t * (mapped.col(nu) - mapped.col(mu)).squaredNorm());
    }
    report.per_memory.push_back({mu, margin, margin <= report.threshold});
  }
  return report;
}

bool verify_fixed_point(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
                        Index mu) {
  require(mu >= 0 && mu < ps.count(), errc::index_out_of_range,
          "verify_fixed_point: bad memory index");
  const Vector weights = cfg.separation()(cfg.beta, kernel_overlap(fm, ps, ps.data.col(mu)));
  for (Index nu = 0; nu < weights.size(); ++nu) {
    const double target = nu == mu ? 1.0 : 0.0;
    if (std::abs(weights[nu] - target) > 1e-12) return false;
  }
  return true;
}

bool min_distance_condition(const PatternSet& ps, double lipschitz, double alpha, double beta) {
  require(alpha > 1.0 && alpha <= 2.0, errc::alpha_out_of_range,
          "min_distance_condition: requires alpha in (1,2]");
  require(lipschitz > 0.0 && beta > 0.0, errc::invalid_argument,
          "min_distance_condition: L and beta must be positive");
  require(ps.count() >= 2, errc::degenerate_set,
          "min_distance_condition: need at least two memories");
  const SeparationStats stats = separation_stats(ps);
  const double min_distance = 2.0 * stats.radius;
  return min_distance >= std::sqrt(2.0 / (lipschitz * lipschitz * beta * (alpha - 1.0)));
}

}  // namespace uhop

#pragma once

#include "uhop/energy.hpp"

#include <vector>

namespace uhop {

// Exact-retrieval diagnostics for a sparse separation (alpha > 1). A memory
// is flagged satisfied when its worst log-RBF proximity to any other memory
// clears the threshold -2t/(beta(alpha-1)).
struct ExactRetrievalReport {
  struct Row {
    Index mu;
    double margin;  // max over nu != mu of ell_phi(xi_nu, xi_mu)
    bool satisfied;
  };
  std::vector<Row> per_memory;
  double threshold;
  double alpha, beta, t;
};

ExactRetrievalReport check_exact_retrieval(const FeatureMap& fm, const PatternSet& ps,
                                           double alpha, double beta, double t);

// True iff Sep_alpha(beta, K(Xi, xi_mu)) is the one-hot e_mu to 1e-12 per
// entry, i.e. the memory itself is a fixed point of the dynamics.
bool verify_fixed_point(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
                        Index mu);

// Lipschitz-based sufficient condition: min pairwise memory distance
// >= sqrt(2/(L^2 beta (alpha-1))), boundary inclusive.
bool min_distance_condition(const PatternSet& ps, double lipschitz, double alpha, double beta);

}  // namespace uhop

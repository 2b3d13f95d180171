#pragma once

#include "uhop/kernel.hpp"
#include "uhop/separation.hpp"

#include <vector>

namespace uhop {

struct RetrievalConfig {
  double beta = 1.0;
  double t = 2.0;
  double alpha = 1.0;
  int max_iters = 1;        // the benchmarks use single-step updates
  double tol = 1e-10;       // fixed-point residual tolerance
  double bisection_tol = 1e-9;
  int bisection_max_iter = 100;

  SeparationFn separation() const { return {alpha, bisection_tol, bisection_max_iter}; }
};

struct RetrievalTrace {
  std::vector<Vector> iterates;   // x_0 ... x_K
  std::vector<double> energies;   // one per iterate, nonincreasing up to slack
  std::vector<double> residuals;  // |x_{k+1} - x_k|, one per step
  bool converged = false;
  Vector retrieved;
};

// Kernelized energy K(x,x)/2 - psi_star(alpha, beta, K(Xi, x)).
double energy(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
              const Vector& x);

// One update of the retrieval dynamics: Xi * Sep_alpha(beta, K(Xi, x)).
// The output is a convex combination of the memory columns.
Vector retrieval_step(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
                      const Vector& x);

// Iterates the dynamics until the residual drops below cfg.tol or
// cfg.max_iters steps have run, recording the full trace.
RetrievalTrace retrieve(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
                        const Vector& x0);

// Single-step retrieval error bound 2m(M-1)exp(-beta(delta_mu - 2mR)) for
// queries inside the sphere of radius R around memory mu.
double error_bound(const SeparationStats& stats, double beta, Index mu);
double error_bound(const PatternSet& ps, double beta, Index mu);

// Distance-similarity comparison dynamics: the kernel overlap is replaced by
// negative per-memory l2 or l1 distances before the separation map.
enum class Similarity { neg_l2, neg_l1 };
Vector distance_baseline_step(const PatternSet& ps, const RetrievalConfig& cfg, Similarity sim,
                              const Vector& x);

}  // namespace uhop

#pragma once

#include "uhop/common.hpp"

namespace uhop {

// log(sum_mu exp(beta * z_mu)) / beta, max-subtracted.
double lse(double beta, const Vector& z);

// Probability vector exp(beta*z) / sum, numerically stabilized.
Vector softmax(double beta, const Vector& z);

// Exact Euclidean projection of z onto the probability simplex via the
// descending-sort threshold construction. Ties are broken by a stable sort
// on the original index so results are deterministic.
Vector sparsemax(const Vector& z);

// alpha-entmax of beta*z for alpha in (1,2], solved in the parametric form
//   p_mu = [(alpha-1)*beta*z_mu - tau]_+^{1/(alpha-1)}
// with tau located by bisection until |sum(p) - 1| <= tol.
// Throws errc::bisection_failure if the tolerance is not met in max_iter.
Vector entmax(double alpha, double beta, const Vector& z, double tol = 1e-9,
              int max_iter = 100);

// Tsallis entropy of a simplex point: alpha == 1 gives Shannon entropy
// (-sum p ln p with 0 ln 0 := 0), otherwise sum(p - p^alpha) / (alpha(alpha-1)).
double tsallis_entropy(double alpha, const Vector& p);

// Convex conjugate of the Tsallis regularizer, evaluated variationally:
//   psi_star(alpha, beta, z) = <p*, z> + tsallis_entropy(alpha, p*) / beta
// with p* the matching separation map applied at beta*z. Reduces to
// lse(beta, z) at alpha = 1.
double psi_star(double alpha, double beta, const Vector& z, double bisection_tol = 1e-9,
                int bisection_max_iter = 100);

// The Sep_alpha family: Softmax at alpha=1, exact Sparsemax at alpha=2,
// bisection alpha-entmax in between.
struct SeparationFn {
  double alpha = 1.0;
  double bisection_tol = 1e-9;
  int bisection_max_iter = 100;

  Vector operator()(double beta, const Vector& z) const;
};

}  // namespace uhop

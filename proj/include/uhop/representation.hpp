#pragma once

#include "uhop/kernel.hpp"

#include <cstdint>

namespace uhop {

// Positive column-stochastic attention target: every entry > 0 and every
// column sums to 1 within 1e-12.
struct StochasticMatrix {
  Matrix P;

  explicit StochasticMatrix(Matrix p) : P(std::move(p)) {
    require(P.rows() == P.cols() && P.rows() >= 1, errc::invalid_argument,
            "StochasticMatrix: must be square and nonempty");
    require((P.array() > 0.0).all(), errc::invalid_argument,
            "StochasticMatrix: entries must be strictly positive");
    for (Index j = 0; j < P.cols(); ++j)
      require(std::abs(P.col(j).sum() - 1.0) <= 1e-12, errc::invalid_argument,
              "StochasticMatrix: column sums must equal 1");
  }
};

// Feature map whose mapped memory columns are orthonormal, so the induced
// Gram matrix over the memory set is the identity. Requires M <= d and
// linearly independent memories. The seed rotates the orthonormal frame.
FeatureMap orthogonalize_features(const PatternSet& ps, std::uint64_t seed);

struct AttentionFactors {
  Matrix w_k;  // D_Phi x D_Phi
  Matrix w_q;  // D_Phi x D_Phi
};

// Key/query factors realizing the target attention over orthonormal features:
// the inner product matrix (W_K X)^T (W_Q X) equals log(P D0)/beta
// elementwise, so the column-wise softmax recovers P for any positive
// diagonal D0.
AttentionFactors realize_attention(const Matrix& features, const StochasticMatrix& target,
                                   double beta, const Vector& d0);

// Max absolute deviation of columnwise-softmax(beta (W_K X)^T (W_Q X)) from
// the target.
double verify_realization(const AttentionFactors& factors, const Matrix& features,
                          const StochasticMatrix& target, double beta);

// End-to-end realization check over `trials` random (patterns, P, D0, beta)
// instances; returns the worst deviation observed.
double verify_representation_trials(Index m, Index d, Index trials, std::uint64_t seed);

}  // namespace uhop

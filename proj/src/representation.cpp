#include "uhop/representation.hpp"

#include "uhop/rng.hpp"

#include <cmath>

namespace uhop {

FeatureMap orthogonalize_features(const PatternSet& ps, std::uint64_t seed) {
  const Index d = ps.dim();
  const Index m = ps.count();
  require(m <= d, errc::rank_deficient,
          "orthogonalize_features: more memories than dimensions");

  Eigen::HouseholderQR<Matrix> qr(ps.data);
  const Matrix r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  const double max_diag = r.diagonal().cwiseAbs().maxCoeff();
  require(r.diagonal().cwiseAbs().minCoeff() > 1e-10 * max_diag, errc::rank_deficient,
          "orthogonalize_features: memory columns are linearly dependent");
  const Matrix q = qr.householderQ() * Matrix::Identity(d, m);

  // W Xi = W Q R = O [I_M; 0], i.e. the mapped memories become the first M
  // columns of a seeded random rotation.
  Matrix unrotated = Matrix::Zero(d, d);
  unrotated.topRows(m) =
      r.triangularView<Eigen::Upper>().solve(Matrix::Identity(m, m)) * q.transpose();

  Rng rng(seed);
  Matrix g(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) g(i, j) = rng.next_normal();
  Eigen::HouseholderQR<Matrix> rot_qr(g);
  const Matrix rotation = rot_qr.householderQ() * Matrix::Identity(d, d);

  return FeatureMap(rotation * unrotated);
}

AttentionFactors realize_attention(const Matrix& features, const StochasticMatrix& target,
                                   double beta, const Vector& d0) {
  const Index feature_dim = features.rows();
  const Index m = features.cols();
  require(feature_dim >= m, errc::dimension_mismatch,
          "realize_attention: features must have at least M rows");
  require(target.P.rows() == m, errc::dimension_mismatch,
          "realize_attention: target size must match the feature count");
  require(d0.size() == m && (d0.array() > 0.0).all(), errc::invalid_argument,
          "realize_attention: D0 must be a positive diagonal");
  require(beta > 0.0, errc::invalid_argument, "realize_attention: beta must be positive");
  require((features.transpose() * features - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-8,
          errc::invalid_argument, "realize_attention: feature columns must be orthonormal");

  const Matrix product = (target.P * d0.asDiagonal()).array().log().matrix() / beta;

  // Factor split: keys carry an identity block, queries carry the target
  // product; orthonormal features make X^T the left inverse of X.
  Matrix wk_tilde = Matrix::Zero(feature_dim, m);
  wk_tilde.topRows(m).setIdentity();
  Matrix wq_tilde = Matrix::Zero(feature_dim, m);
  wq_tilde.topRows(m) = product;

  AttentionFactors factors;
  factors.w_k = wk_tilde * features.transpose();
  factors.w_q = wq_tilde * features.transpose();
  return factors;
}

double verify_representation_trials(Index m, Index d, Index trials, std::uint64_t seed) {
  require(m >= 1 && d >= m, errc::dimension_mismatch,
          "verify_representation_trials: requires 1 <= M <= d");
  require(trials >= 1, errc::invalid_argument, "verify_representation_trials: trials >= 1");

  double worst = 0.0;
  for (Index trial = 0; trial < trials; ++trial) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(trial)));
    const PatternSet ps = generate_gaussian(d, m, rng.next_u64());
    const FeatureMap fm = orthogonalize_features(ps, rng.next_u64());
    const Matrix features = fm.W * ps.data;

    Matrix p(m, m);
    for (Index j = 0; j < m; ++j) {
      for (Index i = 0; i < m; ++i) p(i, j) = 0.05 + rng.next_uniform();
      p.col(j) /= p.col(j).sum();
    }
    Vector d0(m);
    for (Index i = 0; i < m; ++i) d0[i] = std::exp(2.0 * rng.next_uniform() - 1.0);
    const double beta = 0.5 + 1.5 * rng.next_uniform();

    const StochasticMatrix target(p);
    const AttentionFactors factors = realize_attention(features, target, beta, d0);
    worst = std::max(worst, verify_realization(factors, features, target, beta));
  }
  return worst;
}

double verify_realization(const AttentionFactors& factors, const Matrix& features,
                          const StochasticMatrix& target, double beta) {
  require(factors.w_k.cols() == features.rows() && factors.w_q.cols() == features.rows(),
          errc::dimension_mismatch, "verify_realization: factor shapes do not match features");
  const Matrix scores = beta * (factors.w_k * features).transpose() * (factors.w_q * features);
  Matrix realized(scores.rows(), scores.cols());
  for (Index j = 0; j < scores.cols(); ++j) {
    const Vector col = scores.col(j);
    const double peak = col.maxCoeff();
    Vector e = (col.array() - peak).exp();
    realized.col(j) = e / e.sum();
  }
  return (realized - target.P).cwiseAbs().maxCoeff();
}

}  // namespace uhop

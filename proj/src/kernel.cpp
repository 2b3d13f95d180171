#include "uhop/kernel.hpp"

#include "uhop/rng.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace uhop {

FeatureMap init_feature_map(Index d, Index feature_dim, std::uint64_t seed) {
  require(d >= 1, errc::invalid_argument, "init_feature_map: d >= 1");
  require(feature_dim >= d, errc::dimension_mismatch,
          "init_feature_map: feature dimension must be at least d");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int attempt = 0; attempt < 64; ++attempt) {
    Matrix w(feature_dim, d);
    for (Index j = 0; j < d; ++j)
      for (Index i = 0; i < feature_dim; ++i) w(i, j) = scale * rng.next_normal();
    Eigen::JacobiSVD<Matrix> svd(w);
    if (svd.singularValues().minCoeff() > 1e-8) return FeatureMap(std::move(w));
  }
  fail(errc::rank_deficient, "init_feature_map: could not draw a full-rank matrix");
}

FeatureMap identity_extended(Index d, Index feature_dim) {
  require(d >= 1, errc::invalid_argument, "identity_extended: d >= 1");
  require(feature_dim >= d, errc::dimension_mismatch,
          "identity_extended: feature dimension must be at least d");
  Matrix w = Matrix::Zero(feature_dim, d);
  w.topRows(d).setIdentity();
  return FeatureMap(std::move(w));
}

Vector phi(const FeatureMap& fm, const Vector& u) {
  require(u.size() == fm.input_dim(), errc::dimension_mismatch, "phi: dimension mismatch");
  return fm.W * u;
}

double kernel_eval(const FeatureMap& fm, const Vector& u, const Vector& v) {
  require(u.size() == fm.input_dim() && v.size() == fm.input_dim(), errc::dimension_mismatch,
          "kernel_eval: dimension mismatch");
  return (fm.W * u).dot(fm.W * v);
}

Vector kernel_overlap(const FeatureMap& fm, const PatternSet& ps, const Vector& x) {
  require(ps.dim() == fm.input_dim() && x.size() == fm.input_dim(), errc::dimension_mismatch,
          "kernel_overlap: dimension mismatch");
  return (fm.W * ps.data).transpose() * (fm.W * x);
}

double ell_phi(const FeatureMap& fm, double t, const Vector& u, const Vector& v) {
  require(t > 0.0, errc::invalid_argument, "ell_phi: t must be positive");
  return -t * (fm.W * (u - v)).squaredNorm();
}

FeatureMap normalize_rows(const FeatureMap& fm) {
  Matrix w = fm.W;
  for (Index i = 0; i < w.rows(); ++i) {
    const double norm = w.row(i).norm();
    if (norm > 1e-12) w.row(i) /= norm;
  }
  return FeatureMap(std::move(w));
}

FeatureMap normalize_rows(const FeatureMap& fm, const PatternSet& ps, RowScaling scaling) {
  FeatureMap unit = normalize_rows(fm);
  if (scaling == RowScaling::unit_norm) return unit;
  const double mapped = (unit.W * ps.data).colwise().norm().maxCoeff();
  if (mapped <= 1e-12) return unit;
  const double raw = ps.data.colwise().norm().maxCoeff();
  return FeatureMap(unit.W * (raw / mapped));
}

double lipschitz_of_phi(const FeatureMap& fm) {
  const Matrix a = fm.W.transpose() * fm.W;
  const Index d = a.rows();

  // Fixed pseudo-random start; a deterministic vector could be orthogonal to
  // the leading eigenvector on adversarial inputs.
  Rng rng(0x5eedu);
  Vector v(d);
  for (Index i = 0; i < d; ++i) v[i] = 1.0 + 0.01 * rng.next_normal();
  v.normalize();

  double lambda = 0.0;
  for (int it = 0; it < 10000; ++it) {
    Vector av = a * v;
    const double norm = av.norm();
    if (norm == 0.0) return 0.0;
    v = av / norm;
    const double next = v.dot(a * v);
    if (std::abs(next - lambda) <= 1e-9 * std::max(next, 1.0)) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return std::sqrt(std::max(lambda, 0.0));
}

}  // namespace uhop

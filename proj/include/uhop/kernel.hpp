#pragma once

#include "uhop/common.hpp"
#include "uhop/patterns.hpp"

#include <cstdint>

namespace uhop {

// Linear feature map u -> W u defining the kernel K(u,v) = <Wu, Wv>.
// Immutable by convention: every transform returns a new value.
struct FeatureMap {
  Matrix W;  // D_Phi x d

  FeatureMap() = default;
  explicit FeatureMap(Matrix w) : W(std::move(w)) {
    require(W.rows() >= 1 && W.cols() >= 1, errc::invalid_argument, "FeatureMap: empty matrix");
    require(W.allFinite(), errc::invalid_argument, "FeatureMap: entries must be finite");
  }

  Index feature_dim() const { return W.rows(); }
  Index input_dim() const { return W.cols(); }
};

// Gaussian init, entries N(0,1)/sqrt(d), redrawn until the smallest singular
// value exceeds 1e-8 so the induced d x d form W^T W is nonsingular.
// Requires feature_dim >= d.
FeatureMap init_feature_map(Index d, Index feature_dim, std::uint64_t seed);

// Top-d identity block with zero rows below: the kernel reduces to the plain
// inner product, so retrieval matches the unkernelized model exactly.
FeatureMap identity_extended(Index d, Index feature_dim);

Vector phi(const FeatureMap& fm, const Vector& u);
double kernel_eval(const FeatureMap& fm, const Vector& u, const Vector& v);

// {K(xi_mu, x)}_mu as a length-M vector.
Vector kernel_overlap(const FeatureMap& fm, const PatternSet& ps, const Vector& x);

// Log Gaussian similarity of mapped points: -t * |phi(u) - phi(v)|^2, always <= 0.
double ell_phi(const FeatureMap& fm, double t, const Vector& u, const Vector& v);

// Row treatment after Stage I. unit_norm scales every nonzero row to unit
// length; preserve_memory_norm additionally rescales W so the largest mapped
// memory norm matches the largest raw memory norm.
enum class RowScaling { unit_norm, preserve_memory_norm };

FeatureMap normalize_rows(const FeatureMap& fm);
FeatureMap normalize_rows(const FeatureMap& fm, const PatternSet& ps, RowScaling scaling);

// Operator norm of W (largest singular value) by power iteration on W^T W,
// to 1e-9 relative tolerance.
double lipschitz_of_phi(const FeatureMap& fm);

}  // namespace uhop

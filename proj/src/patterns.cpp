#include "uhop/patterns.hpp"

#include "uhop/rng.hpp"

#include <cmath>
#include <limits>

namespace uhop {

SeparationStats separation_stats(const PatternSet& ps) {
  const Index m_count = ps.count();
  SeparationStats stats;
  stats.delta.resize(m_count);
  stats.max_norm = ps.data.colwise().norm().maxCoeff();

  if (m_count == 1) {
    stats.delta[0] = ps.data.col(0).squaredNorm();
    stats.radius = std::numeric_limits<double>::infinity();
    return stats;
  }

  const Matrix gram = ps.data.transpose() * ps.data;  // M x M inner products
  double min_dist2 = std::numeric_limits<double>::infinity();
  for (Index mu = 0; mu < m_count; ++mu) {
    double max_cross = -std::numeric_limits<double>::infinity();
    for (Index nu = 0; nu < m_count; ++nu) {
      if (nu == mu) continue;
      max_cross = std::max(max_cross, gram(nu, mu));
      const double dist2 = gram(mu, mu) + gram(nu, nu) - 2.0 * gram(nu, mu);
      min_dist2 = std::min(min_dist2, dist2);
    }
    stats.delta[mu] = gram(mu, mu) - max_cross;
  }
  stats.radius = 0.5 * std::sqrt(std::max(min_dist2, 0.0));
  return stats;
}

QueryCorruption QueryCorruption::mask(double fraction, std::uint64_t seed) {
  require(fraction >= 0.0 && fraction <= 1.0, errc::invalid_argument,
          "QueryCorruption: mask fraction must lie in [0,1]");
  return {Kind::mask_fraction, fraction, seed};
}

QueryCorruption QueryCorruption::noise(double level, std::uint64_t seed) {
  require(level >= 0.0, errc::invalid_argument,
          "QueryCorruption: noise level must be nonnegative");
  return {Kind::gaussian_noise, level, seed};
}

Vector corrupt(const Vector& x, const QueryCorruption& c, const SeparationStats& stats) {
  require(x.allFinite(), errc::invalid_argument, "corrupt: query must be finite");
  Rng rng(c.seed);
  Vector out = x;

  if (c.kind == QueryCorruption::Kind::mask_fraction) {
    const auto d = static_cast<std::uint64_t>(x.size());
    const auto n_mask = static_cast<std::uint64_t>(c.amount * static_cast<double>(d));
    // partial Fisher-Yates over coordinate indices
    std::vector<Index> idx(d);
    for (std::uint64_t i = 0; i < d; ++i) idx[i] = static_cast<Index>(i);
    for (std::uint64_t i = 0; i < n_mask; ++i) {
      const std::uint64_t j = i + rng.next_below(d - i);
      std::swap(idx[i], idx[j]);
      out[idx[i]] = 0.0;
    }
    return out;
  }

  if (c.amount == 0.0) return out;
  require(stats.max_norm > 0.0, errc::invalid_argument,
          "corrupt: noise needs a pattern set with positive max norm");
  Vector eta(x.size());
  for (Index i = 0; i < eta.size(); ++i) eta[i] = rng.next_normal();
  const double norm = eta.norm();
  require(norm > 0.0, errc::invalid_argument, "corrupt: degenerate noise draw");
  out += (c.amount * stats.max_norm / norm) * eta;
  return out;
}

namespace {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = rng.next_normal();
  return m;
}

}  // namespace

PatternSet generate_gaussian(Index d, Index m, std::uint64_t seed) {
  require(d >= 1 && m >= 1, errc::invalid_argument, "generate_gaussian: d, M >= 1");
  Rng rng(seed);
  Matrix data = gaussian_matrix(d, m, rng);
  for (Index j = 0; j < m; ++j) data.col(j).normalize();
  return PatternSet(std::move(data));
}

PatternSet generate_orthogonal(Index d, Index m, std::uint64_t seed) {
  require(d >= 1 && m >= 1, errc::invalid_argument, "generate_orthogonal: d, M >= 1");
  require(m <= d, errc::dimension_mismatch,
          "generate_orthogonal: cannot fit more than d orthogonal columns");
  Rng rng(seed);
  const Matrix g = gaussian_matrix(d, m, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, m);
  return PatternSet(std::move(q));
}

PatternSet generate_near_parallel(Index d, Index m, double angle, std::uint64_t seed) {
  require(d >= 2 && m >= 1, errc::invalid_argument, "generate_near_parallel: d >= 2, M >= 1");
  Rng rng(seed);
  Vector base(d);
  for (Index i = 0; i < d; ++i) base[i] = rng.next_normal();
  base.normalize();

  Matrix data(d, m);
  for (Index j = 0; j < m; ++j) {
    Vector v(d);
    for (Index i = 0; i < d; ++i) v[i] = rng.next_normal();
    v -= v.dot(base) * base;  // perpendicular component
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    data.col(j) = std::cos(angle) * base + std::sin(angle) * v;
  }
  return PatternSet(std::move(data));
}

PatternSet select_columns(const PatternSet& ps, const std::vector<Index>& indices) {
  require(!indices.empty(), errc::invalid_argument, "select_columns: empty selection");
  Matrix data(ps.dim(), static_cast<Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    require(indices[k] >= 0 && indices[k] < ps.count(), errc::index_out_of_range,
            "select_columns: index out of range");
    data.col(static_cast<Index>(k)) = ps.data.col(indices[k]);
  }
  return PatternSet(std::move(data));
}

}  // namespace uhop

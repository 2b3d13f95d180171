#include "uhop/energy.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace uhop;

namespace {

RetrievalConfig config(double alpha, double beta, int iters = 1) {
  RetrievalConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.max_iters = iters;
  return cfg;
}

}  // namespace

TEST_CASE("energy closed forms under the identity map") {
  // single stored memory: lse of a one-element overlap is the overlap itself
  Matrix xi(3, 1);
  xi.col(0) << 1.0, 2.0, -1.0;
  const PatternSet ps(xi);
  const FeatureMap id = identity_extended(3, 3);
  const double e = energy(id, ps, config(1.0, 1.0), xi.col(0));
  CHECK(e == doctest::Approx(-0.5 * xi.col(0).squaredNorm()).epsilon(1e-12));

  // zero query against M memories: K(0,0)=0 and lse(1, 0) = log M
  const PatternSet many(Matrix::Random(3, 5));
  const double e0 = energy(id, many, config(1.0, 1.0), Vector::Zero(3));
  CHECK(e0 == doctest::Approx(-std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("kernelized energy reduces to the plain model at alpha 1") {
  Rng rng(51);
  for (int n = 0; n < 200; ++n) {
    const Index d = 2 + static_cast<Index>(rng.next_below(6));
    const Index m = 2 + static_cast<Index>(rng.next_below(6));
    const PatternSet ps(testutil::random_matrix(d, m, rng));
    const Vector x = testutil::random_vector(d, rng);
    const double beta = 0.5 + 2.0 * rng.next_uniform();
    const FeatureMap id = identity_extended(d, d);

    const double direct = -lse(beta, ps.data.transpose() * x) + 0.5 * x.squaredNorm();
    CHECK(energy(id, ps, config(1.0, beta), x) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("retrieval step stays in the convex hull and handles M=1") {
  Rng rng(53);
  Matrix xi(4, 1);
  xi.col(0) << 0.5, -0.25, 1.0, 2.0;
  const PatternSet single(xi);
  const FeatureMap id = identity_extended(4, 4);
  for (int n = 0; n < 5; ++n) {
    const Vector x = testutil::random_vector(4, rng);
    CHECK((retrieval_step(id, single, config(1.0, 1.0), x) - xi.col(0)).cwiseAbs().maxCoeff() ==
          0.0);
  }
}

TEST_CASE("retrieval step reduces to softmax and sparsemax updates under identity") {
  Rng rng(57);
  for (int n = 0; n < 200; ++n) {
    const Index d = 2 + static_cast<Index>(rng.next_below(6));
    const Index m = 2 + static_cast<Index>(rng.next_below(6));
    const PatternSet ps(testutil::random_matrix(d, m, rng));
    const Vector x = testutil::random_vector(d, rng);
    const double beta = 0.5 + 2.0 * rng.next_uniform();
    const FeatureMap id = identity_extended(d, d);

    const Vector soft = retrieval_step(id, ps, config(1.0, beta), x);
    CHECK((soft - testutil::direct_softmax_update(ps.data, beta, x)).cwiseAbs().maxCoeff() <
          1e-12);

    const Vector sparse = retrieval_step(id, ps, config(2.0, beta), x);
    CHECK((sparse - testutil::direct_sparsemax_update(ps.data, beta, x)).cwiseAbs().maxCoeff() <
          1e-12);
  }
}

TEST_CASE("sparse update returns the exact memory on well separated sets") {
  const PatternSet ps = generate_orthogonal(6, 6, 3);
  const FeatureMap id = identity_extended(6, 6);
  for (Index mu = 0; mu < 6; ++mu) {
    // orthonormal memories: overlap gap is 1, beta >= 1/(alpha-1) forces one-hot
    const Vector weights =
        config(2.0, 10.0).separation()(10.0, kernel_overlap(id, ps, ps.data.col(mu)));
    CHECK(weights[mu] == doctest::Approx(1.0));
    const Vector out = retrieval_step(id, ps, config(2.0, 10.0), ps.data.col(mu));
    CHECK((out - ps.data.col(mu)).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("retrieve trace bookkeeping") {
  const PatternSet ps = generate_orthogonal(5, 5, 7);
  const FeatureMap id = identity_extended(5, 5);

  // starting at a fixed point: one step, zero residual, converged
  RetrievalConfig cfg = config(2.0, 10.0, 8);
  const RetrievalTrace tr = retrieve(id, ps, cfg, ps.data.col(2));
  CHECK(tr.converged);
  CHECK(tr.residuals.size() == 1);
  CHECK(tr.iterates.size() == 2);
  CHECK(tr.energies.size() == 2);
  CHECK(tr.residuals[0] == doctest::Approx(0.0));
  CHECK((tr.retrieved - ps.data.col(2)).cwiseAbs().maxCoeff() < 1e-15);

  // M=1 collapses to the stored memory after one step
  Matrix xi(5, 1);
  xi.col(0) << 1, 2, 3, 4, 5;
  const PatternSet single(xi);
  Rng rng(61);
  const RetrievalTrace one =
      retrieve(identity_extended(5, 5), single, config(1.0, 1.0, 4), testutil::random_vector(5, rng));
  CHECK((one.retrieved - xi.col(0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(one.converged);
  CHECK(one.residuals.size() == 2);  // step to the memory, then a zero-residual step
}

TEST_CASE("energy is nonincreasing along retrieval traces") {
  Rng rng(63);
  const double alphas[] = {1.0, 1.5, 2.0};
  for (int n = 0; n < 300; ++n) {
    const Index d = 2 + static_cast<Index>(rng.next_below(5));
    const Index m = 2 + static_cast<Index>(rng.next_below(5));
    const PatternSet ps(testutil::random_matrix(d, m, rng));
    const FeatureMap fm = init_feature_map(d, d + static_cast<Index>(rng.next_below(5)),
                                           rng.next_u64());
    RetrievalConfig cfg = config(alphas[n % 3], 0.5 + 3.0 * rng.next_uniform(), 8);
    const Vector x0 = testutil::random_vector(d, rng, 1.5);
    const RetrievalTrace tr = retrieve(fm, ps, cfg, x0);
    for (std::size_t k = 1; k < tr.energies.size(); ++k)
      CHECK(tr.energies[k] <= tr.energies[k - 1] + 1e-9);
  }
}

TEST_CASE("iterates after the first admit simplex weights") {
  Rng rng(67);
  for (int n = 0; n < 50; ++n) {
    const Index d = 3;
    const Index m = 4;
    const PatternSet ps(testutil::random_matrix(d, m, rng));
    const FeatureMap fm = init_feature_map(d, 6, rng.next_u64());
    RetrievalConfig cfg = config(n % 2 ? 2.0 : 1.0, 1.0 + rng.next_uniform(), 5);
    const RetrievalTrace tr = retrieve(fm, ps, cfg, testutil::random_vector(d, rng));
    for (std::size_t k = 1; k < tr.iterates.size(); ++k) {
      const Vector w = cfg.separation()(cfg.beta, kernel_overlap(fm, ps, tr.iterates[k - 1]));
      CHECK(w.minCoeff() >= 0.0);
      CHECK(std::abs(w.sum() - 1.0) <= 1e-12);
      CHECK((ps.data * w - tr.iterates[k]).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("error bound closed form") {
  const PatternSet ps(Matrix(Matrix::Identity(2, 2)));
  const double bound = error_bound(ps, 1.0, 0);
  CHECK(bound == doctest::Approx(2.0 * std::exp(std::sqrt(2.0) - 1.0)).epsilon(1e-12));
  CHECK(bound == doctest::Approx(3.0264).epsilon(1e-4));

  // A positive margin needs the global radius R to come from a close pair
  // away from the probed memory: one far memory plus two nearby ones.
  Matrix spread(2, 3);
  spread.col(0) << 10.0, 0.0;
  spread.col(1) << 0.0, 0.1;
  spread.col(2) << 0.0, -0.1;
  const PatternSet well(spread);
  const SeparationStats stats = separation_stats(well);
  REQUIRE(stats.delta[0] - 2.0 * stats.max_norm * stats.radius > 0.0);
  CHECK(error_bound(well, 1.0, 0) < 1e-6);
  CHECK(error_bound(well, 2.0, 0) < error_bound(well, 1.0, 0));

  // doubling beta squares the exponential factor
  const double m_count = 3.0;
  const double b1 = error_bound(well, 1.0, 0) / (2.0 * stats.max_norm * (m_count - 1.0));
  const double b2 = error_bound(well, 2.0, 0) / (2.0 * stats.max_norm * (m_count - 1.0));
  CHECK(b2 == doctest::Approx(b1 * b1).epsilon(1e-9));

  CHECK_THROWS_AS(error_bound(ps, 1.0, 5), Error);
  Matrix one(2, 1);
  one.col(0) << 1.0, 0.0;
  CHECK_THROWS_AS(error_bound(PatternSet(one), 1.0, 0), Error);
}

TEST_CASE("distance baseline step recovers exact memories at zero distance") {
  const PatternSet ps = generate_gaussian(6, 4, 71);
  RetrievalConfig cfg = config(1.0, 50.0);
  for (Index mu = 0; mu < 4; ++mu) {
    const Vector out = distance_baseline_step(ps, cfg, Similarity::neg_l2, ps.data.col(mu));
    CHECK((out - ps.data.col(mu)).cwiseAbs().maxCoeff() < 1e-9);
    const Vector out1 = distance_baseline_step(ps, cfg, Similarity::neg_l1, ps.data.col(mu));
    CHECK((out1 - ps.data.col(mu)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

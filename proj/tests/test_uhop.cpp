#include "uhop/uhop.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace uhop;

namespace {

Stage1Config identity_stage1(int iters = 0) {
  Stage1Config cfg;
  cfg.iters = iters;
  cfg.init = WeightInit::identity_extended;
  return cfg;
}

RetrievalConfig retrieval(double alpha, double beta, int iters = 1) {
  RetrievalConfig cfg;
  cfg.alpha = alpha;
  cfg.beta = beta;
  cfg.max_iters = iters;
  return cfg;
}

}  // namespace

TEST_CASE("identity seeding with zero stage1 iterations reproduces the plain update") {
  Rng rng(101);
  for (int n = 0; n < 100; ++n) {
    const Index d = 2 + static_cast<Index>(rng.next_below(8));
    const Index m = 2 + static_cast<Index>(rng.next_below(8));
    const PatternSet ps(testutil::random_matrix(d, m, rng));
    const Vector query = testutil::random_vector(d, rng);
    const Vector truth = ps.data.col(0);
    const double beta = 0.5 + rng.next_uniform();

    const UHopResult res =
        uhop_retrieve(ps, identity_stage1(), retrieval(1.0, beta), query, truth, 7);
    const Vector direct = testutil::direct_softmax_update(ps.data, beta, query);
    CHECK((res.retrieved - direct).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(res.sse == doctest::Approx((direct - truth).squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("exact fixed point gives zero sse under the sparse map") {
  const PatternSet ps = generate_orthogonal(8, 6, 11);
  for (Index mu = 0; mu < 6; ++mu) {
    const UHopResult res = uhop_retrieve(ps, identity_stage1(), retrieval(2.0, 10.0),
                                         ps.data.col(mu), ps.data.col(mu), 3);
    CHECK(res.sse == doctest::Approx(0.0));
    CHECK(res.trace.converged);
  }
}

TEST_CASE("fixed seeds reproduce results bit for bit") {
  const PatternSet ps = generate_gaussian(10, 6, 21);
  Stage1Config s1;
  s1.iters = 5;
  s1.step_size = 0.5;
  const RetrievalConfig cfg = retrieval(1.0, 2.0, 2);
  Rng rng(103);
  const Vector query = testutil::random_vector(10, rng);
  const Vector truth = ps.data.col(2);

  const UHopResult a = uhop_retrieve(ps, s1, cfg, query, truth, 99);
  const UHopResult b = uhop_retrieve(ps, s1, cfg, query, truth, 99);
  CHECK((a.retrieved - b.retrieved).cwiseAbs().maxCoeff() == 0.0);
  CHECK(a.sse == b.sse);
  CHECK(a.final_loss == b.final_loss);

  const UHopResult c = uhop_retrieve(ps, s1, cfg, query, truth, 100);
  CHECK((a.retrieved - c.retrieved).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("batch retrieval reuses one stage1 model across queries") {
  const PatternSet ps = generate_gaussian(12, 8, 31);
  Stage1Config s1;
  s1.iters = 10;
  s1.step_size = 0.5;
  const RetrievalConfig cfg = retrieval(1.0, 1.0);
  const QueryCorruption corruption = QueryCorruption::mask(0.5, 555);

  const auto batch = batch_retrieve(ps, s1, cfg, corruption, 77);
  REQUIRE(batch.size() == 8);

  const FeatureMap shared = stage1_model(ps, s1, 77);
  const double shared_loss = separation_loss(shared, ps, s1.t, s1.loss);
  const SeparationStats stats = separation_stats(ps);
  for (Index mu = 0; mu < 8; ++mu) {
    const Vector truth = ps.data.col(mu);
    const Vector query =
        corrupt(truth, corruption.with_seed(Rng::derive(corruption.seed, mu)), stats);
    const UHopResult direct = retrieve_with(shared, ps, cfg, query, truth, shared_loss);
    CHECK(batch[mu].sse == direct.sse);
    CHECK((batch[mu].retrieved - direct.retrieved).cwiseAbs().maxCoeff() == 0.0);
    CHECK(batch[mu].final_loss == shared_loss);
  }
}

TEST_CASE("uncorrupted queries at exact fixed points retrieve perfectly") {
  const PatternSet ps = generate_orthogonal(8, 8, 41);
  const auto batch = batch_retrieve(ps, identity_stage1(), retrieval(2.0, 10.0),
                                    QueryCorruption::mask(0.0, 1), 5);
  for (const auto& r : batch) CHECK(r.sse == doctest::Approx(0.0));
}

TEST_CASE("single memory batch always returns the stored pattern") {
  Matrix xi(4, 1);
  xi.col(0) << 0.2, 0.4, 0.6, 0.8;
  const PatternSet ps(xi);
  const auto batch = batch_retrieve(ps, identity_stage1(), retrieval(1.0, 1.0),
                                    QueryCorruption::mask(0.5, 9), 5);
  REQUIRE(batch.size() == 1);
  CHECK((batch[0].retrieved - xi.col(0)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("more stage1 iterations do not hurt masked retrieval on digits-like sets") {
  // tight cluster of unit patterns; kernel learning must help
  const PatternSet ps = generate_near_parallel(16, 10, 0.12, 51);
  Stage1Config s1 = identity_stage1();
  s1.step_size = 1.0;
  const RetrievalConfig cfg = retrieval(1.0, 1.0);
  const QueryCorruption corruption = QueryCorruption::mask(0.5, 321);

  double previous = -1.0;
  for (int iters : {0, 1, 10, 100}) {
    s1.iters = iters;
    const auto batch = batch_retrieve(ps, s1, cfg, corruption, 13);
    double mean_sse = 0.0;
    for (const auto& r : batch) mean_sse += r.sse;
    mean_sse /= static_cast<double>(batch.size());
    if (previous >= 0.0) CHECK(mean_sse <= previous + 1e-12);
    previous = mean_sse;
  }
}

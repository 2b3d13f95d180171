#include "uhop/analysis.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>

using namespace uhop;

namespace {

// Unit-norm well-separated patterns under a scaled isometry: feature norms
// are equal, which is the premise under which the margin condition is
// equivalent to the one-hot fixed point.
struct Instance {
  PatternSet ps;
  FeatureMap fm;
};

Instance scaled_isometry_instance(Index d, Index m, double scale, std::uint64_t seed) {
  PatternSet ps = generate_orthogonal(d, m, seed);
  const PatternSet frame = generate_orthogonal(d, d, seed ^ 0xabcdefULL);
  return {std::move(ps), FeatureMap(scale * frame.data.transpose())};
}

}  // namespace

TEST_CASE("margins and threshold on orthonormal features") {
  // Unit orthogonal features sit at squared distance 2, so the margin is
  // -t*2. At beta=1, alpha=2 that coincides with the threshold exactly
  // (boundary case); beta=2 keeps the check strictly inside.
  const PatternSet ps = generate_orthogonal(6, 4, 61);
  const FeatureMap id = identity_extended(6, 6);
  const ExactRetrievalReport report = check_exact_retrieval(id, ps, 2.0, 2.0, 2.0);
  CHECK(report.threshold == doctest::Approx(-2.0));
  for (const auto& row : report.per_memory) {
    CHECK(row.margin == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(row.satisfied);
  }
}

TEST_CASE("duplicate memories can never satisfy the margin") {
  Matrix dup(4, 3);
  dup.col(0) << 1.0, 0.0, 0.0, 0.0;
  dup.col(1) = dup.col(0);
  dup.col(2) << 0.0, 1.0, 0.0, 0.0;
  const ExactRetrievalReport report =
      check_exact_retrieval(identity_extended(4, 4), PatternSet(dup), 2.0, 1.0, 2.0);
  CHECK(report.per_memory[0].margin == doctest::Approx(0.0));
  CHECK_FALSE(report.per_memory[0].satisfied);
  CHECK_FALSE(report.per_memory[1].satisfied);
}

TEST_CASE("alpha at or below one is rejected") {
  const PatternSet ps = generate_orthogonal(4, 3, 67);
  const FeatureMap id = identity_extended(4, 4);
  CHECK_THROWS_AS(check_exact_retrieval(id, ps, 1.0, 1.0, 2.0), Error);
  try {
    check_exact_retrieval(id, ps, 0.5, 1.0, 2.0);
  } catch (const Error& e) {
    CHECK(e.code() == errc::alpha_out_of_range);
  }
}

TEST_CASE("satisfied margins imply one-hot fixed points") {
  Rng rng(71);
  int satisfied_seen = 0;
  for (int n = 0; n < 300; ++n) {
    const Index d = 3 + static_cast<Index>(rng.next_below(6));
    const Index m = 2 + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(d) - 1));
    const double alpha = 1.1 + 0.9 * rng.next_uniform();
    const double beta = 0.5 + 2.0 * rng.next_uniform();
    const double t = 0.5 + 2.0 * rng.next_uniform();
    // scale straddles the satisfaction boundary across instances
    const double scale = std::sqrt(1.0 / (beta * (alpha - 1.0))) * (0.7 + rng.next_uniform());
    const Instance inst = scaled_isometry_instance(d, m, scale, rng.next_u64());

    const ExactRetrievalReport report = check_exact_retrieval(inst.fm, inst.ps, alpha, beta, t);
    RetrievalConfig cfg;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.t = t;
    for (const auto& row : report.per_memory) {
      if (!row.satisfied) continue;
      ++satisfied_seen;
      CHECK(verify_fixed_point(inst.fm, inst.ps, cfg, row.mu));
    }
  }
  CHECK(satisfied_seen > 100);  // the generator must actually exercise the link
}

TEST_CASE("verify_fixed_point edge behavior") {
  Matrix one(3, 1);
  one.col(0) << 1.0, 2.0, 3.0;
  RetrievalConfig cfg;
  cfg.alpha = 1.0;
  CHECK(verify_fixed_point(identity_extended(3, 3), PatternSet(one), cfg, 0));

  // softmax over distinct memories is strictly interior, never one-hot
  const PatternSet ps = generate_orthogonal(4, 3, 73);
  CHECK_FALSE(verify_fixed_point(identity_extended(4, 4), ps, cfg, 0));
  CHECK_THROWS_AS(verify_fixed_point(identity_extended(4, 4), ps, cfg, 3), Error);
}

TEST_CASE("minimum distance condition") {
  // L=1, alpha=2, beta=2: threshold sqrt(2/(1*2*1)) = 1; boundary inclusive
  Matrix xi(2, 2);
  xi.col(0) << 0.0, 0.0;
  xi.col(1) << 1.0, 0.0;
  CHECK(min_distance_condition(PatternSet(xi), 1.0, 2.0, 2.0));

  xi.col(1) << 0.99, 0.0;
  CHECK_FALSE(min_distance_condition(PatternSet(xi), 1.0, 2.0, 2.0));

  // the threshold vanishes as beta grows
  CHECK(min_distance_condition(PatternSet(xi), 1.0, 2.0, 1e6));

  Matrix dup(2, 2);
  dup.col(0) << 1.0, 1.0;
  dup.col(1) = dup.col(0);
  CHECK_FALSE(min_distance_condition(PatternSet(dup), 10.0, 2.0, 1e6));

  CHECK_THROWS_AS(min_distance_condition(PatternSet(xi), 1.0, 1.0, 1.0), Error);
}

TEST_CASE("distance condition under a scaled isometry implies satisfied margins") {
  Rng rng(79);
  for (int n = 0; n < 100; ++n) {
    const Index d = 3 + static_cast<Index>(rng.next_below(5));
    const Index m =
        2 + static_cast<Index>(rng.next_below(std::min<std::uint64_t>(d - 1, 3)));
    const double alpha = 1.2 + 0.8 * rng.next_uniform();
    const double beta = 0.5 + 2.0 * rng.next_uniform();
    const double t = 0.5 + 2.0 * rng.next_uniform();
    const double scale = 0.3 + 2.0 * rng.next_uniform();
    const Instance inst = scaled_isometry_instance(d, m, scale, rng.next_u64());

    // every feature distance saturates the Lipschitz bound for an isometry
    const double lip = lipschitz_of_phi(inst.fm);
    CHECK(lip == doctest::Approx(scale).epsilon(1e-8));
    if (!min_distance_condition(inst.ps, lip, alpha, beta)) continue;
    const ExactRetrievalReport report = check_exact_retrieval(inst.fm, inst.ps, alpha, beta, t);
    for (const auto& row : report.per_memory) CHECK(row.satisfied);
  }
}

TEST_CASE("retrieval from a satisfied memory is exact") {
  Rng rng(83);
  for (int n = 0; n < 100; ++n) {
    const Index d = 4 + static_cast<Index>(rng.next_below(4));
    const Index m = 2 + static_cast<Index>(rng.next_below(3));
    const double alpha = 1.25 + 0.75 * rng.next_uniform();
    const double beta = 1.0 + rng.next_uniform();
    // comfortably above the satisfaction boundary
    const double scale = std::sqrt(2.0 / (beta * (alpha - 1.0)));
    const Instance inst = scaled_isometry_instance(d, m, scale, rng.next_u64());

    const ExactRetrievalReport report =
        check_exact_retrieval(inst.fm, inst.ps, alpha, beta, 2.0);
    RetrievalConfig cfg;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.max_iters = 3;
    for (const auto& row : report.per_memory) {
      REQUIRE(row.satisfied);
      const RetrievalTrace tr = retrieve(inst.fm, inst.ps, cfg, inst.ps.data.col(row.mu));
      CHECK(tr.converged);
      CHECK(tr.residuals.front() < 1e-10);
    }
  }
}

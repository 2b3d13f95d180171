#include "uhop/uhop.hpp"

#include "uhop/rng.hpp"

namespace uhop {

FeatureMap stage1_model(const PatternSet& ps, const Stage1Config& s1, std::uint64_t seed) {
  FeatureMap fm = stage1_init(ps.dim(), s1, seed);
  if (ps.count() < 2) {
    // A single memory has no pairs to separate; Stage I degenerates to the
    // final row treatment.
    return normalize_rows(fm, ps, s1.row_scaling);
  }
  return stage1_optimize(fm, ps, s1).first;
}

UHopResult retrieve_with(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
                         const Vector& query, const Vector& truth, double final_loss) {
  require(truth.size() == ps.dim(), errc::dimension_mismatch,
          "retrieve_with: truth dimension mismatch");
  UHopResult result;
  result.trace = retrieve(fm, ps, cfg, query);
  result.retrieved = result.trace.retrieved;
  result.sse = (result.retrieved - truth).squaredNorm();
  result.final_loss = final_loss;
  return result;
}

UHopResult uhop_retrieve(const PatternSet& ps, const Stage1Config& s1, const RetrievalConfig& cfg,
                         const Vector& query, const Vector& truth, std::uint64_t seed) {
  const FeatureMap fm = stage1_model(ps, s1, seed);
  const double loss = ps.count() >= 2 ? separation_loss(fm, ps, s1.t, s1.loss) : 0.0;
  return retrieve_with(fm, ps, cfg, query, truth, loss);
}

std::vector<UHopResult> batch_retrieve(const PatternSet& ps, const Stage1Config& s1,
                                       const RetrievalConfig& cfg,
                                       const QueryCorruption& corruption, std::uint64_t seed) {
  const FeatureMap fm = stage1_model(ps, s1, seed);
  const double loss = ps.count() >= 2 ? separation_loss(fm, ps, s1.t, s1.loss) : 0.0;
  const SeparationStats stats = separation_stats(ps);

  std::vector<UHopResult> results;
  results.reserve(static_cast<std::size_t>(ps.count()));
  for (Index mu = 0; mu < ps.count(); ++mu) {
    const Vector truth = ps.data.col(mu);
    const QueryCorruption per_memory =
        corruption.with_seed(Rng::derive(corruption.seed, static_cast<std::uint64_t>(mu)));
    const Vector query = corrupt(truth, per_memory, stats);
    results.push_back(retrieve_with(fm, ps, cfg, query, truth, loss));
  }
  return results;
}

}  // namespace uhop

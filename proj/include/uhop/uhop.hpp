#pragma once

#include "uhop/energy.hpp"
#include "uhop/loss.hpp"

#include <vector>

namespace uhop {

struct UHopResult {
  Vector retrieved;
  double sse = 0.0;        // sum of squared differences against the ground truth
  double final_loss = 0.0; // separation loss of the map actually used for retrieval
  RetrievalTrace trace;
};

// Stage I alone: seed the weights, run the separation descent, return the
// normalized map. Depends only on the memory set, never on queries.
FeatureMap stage1_model(const PatternSet& ps, const Stage1Config& s1, std::uint64_t seed);

// Stage II against a prepared model.
UHopResult retrieve_with(const FeatureMap& fm, const PatternSet& ps, const RetrievalConfig& cfg,
                         const Vector& query, const Vector& truth, double final_loss);

// Full two-stage run for a single query.
UHopResult uhop_retrieve(const PatternSet& ps, const Stage1Config& s1, const RetrievalConfig& cfg,
                         const Vector& query, const Vector& truth, std::uint64_t seed);

// Stage I once per memory set, then one corrupted query per memory, retrieved
// with the shared learned map. Results are ordered by memory index; the
// uncorrupted memory serves as ground truth.
std::vector<UHopResult> batch_retrieve(const PatternSet& ps, const Stage1Config& s1,
                                       const RetrievalConfig& cfg,
                                       const QueryCorruption& corruption, std::uint64_t seed);

}  // namespace uhop

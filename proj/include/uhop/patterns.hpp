#pragma once

#include "uhop/common.hpp"

#include <cstdint>
#include <vector>

namespace uhop {

// Stored memory matrix, one memory per column.
struct PatternSet {
  Matrix data;  // d x M

  PatternSet() = default;
  explicit PatternSet(Matrix m) : data(std::move(m)) {
    require(data.rows() >= 1 && data.cols() >= 1, errc::invalid_argument,
            "PatternSet: need at least one row and one column");
    require(data.allFinite(), errc::invalid_argument, "PatternSet: entries must be finite");
  }

  Index dim() const { return data.rows(); }
  Index count() const { return data.cols(); }
  Vector pattern(Index mu) const {
    require(mu >= 0 && mu < count(), errc::index_out_of_range, "PatternSet: bad index");
    return data.col(mu);
  }
};

// Per-memory separation margin delta, half minimal pairwise distance,
// and largest memory norm.
struct SeparationStats {
  Vector delta;
  double radius = 0.0;   // R; +inf for a single memory
  double max_norm = 0.0; // m
};

SeparationStats separation_stats(const PatternSet& ps);

// Query corruption applied to a single pattern. Masking zeroes
// floor(fraction*d) coordinates chosen uniformly without replacement; noise
// adds a Gaussian vector rescaled so its norm equals level * max_norm.
struct QueryCorruption {
  enum class Kind { mask_fraction, gaussian_noise };

  Kind kind = Kind::mask_fraction;
  double amount = 0.0;
  std::uint64_t seed = 0;

  static QueryCorruption mask(double fraction, std::uint64_t seed);
  static QueryCorruption noise(double level, std::uint64_t seed);
  QueryCorruption with_seed(std::uint64_t s) const { return {kind, amount, s}; }
};

Vector corrupt(const Vector& x, const QueryCorruption& c, const SeparationStats& stats);

// Synthetic instance generators used by the CLI and the test suites.
PatternSet generate_gaussian(Index d, Index m, std::uint64_t seed);
PatternSet generate_orthogonal(Index d, Index m, std::uint64_t seed);
// One base direction plus unit perturbations at the given angle (radians);
// angle 0 duplicates the base column.
PatternSet generate_near_parallel(Index d, Index m, double angle, std::uint64_t seed);

// Column subset, preserving order of `indices`.
PatternSet select_columns(const PatternSet& ps, const std::vector<Index>& indices);

}  // namespace uhop

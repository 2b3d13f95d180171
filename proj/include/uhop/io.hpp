#pragma once

#include "uhop/kernel.hpp"
#include "uhop/patterns.hpp"

#include <string>

namespace uhop {

// Big-endian IDX image file (magic 0x00000803) as published for MNIST.
// Images are flattened row-major to d = rows*cols and scaled to [0,1].
PatternSet load_idx(const std::string& path);

// Internal pattern format: header line "d,M", then M lines of d
// comma-separated values. Values are written with 17 significant digits so
// the round trip is exact.
PatternSet load_pattern_csv(const std::string& path);
void save_pattern_csv(const PatternSet& ps, const std::string& path);

// Feature map format: header line "D_Phi,d", then D_Phi rows of d values.
FeatureMap load_feature_map_csv(const std::string& path);
void save_feature_map_csv(const FeatureMap& fm, const std::string& path);

// Shortest representation that parses back to the same double (%.17g).
std::string format_value(double v);

}  // namespace uhop

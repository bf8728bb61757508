#pragma once

#include "uclso/dataset.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <vector>

namespace uclso {

/// Two-dimensional Gaussian-blob dataset with blob-dependent label relevance.
struct ToyConfig {
    std::size_t points_per_blob = 200;
    std::vector<std::array<double, 2>> blob_centers;
    std::vector<double> blob_spreads;
    /// One entry per label: blob index -> fraction of that blob's points marked relevant.
    /// Blobs missing from the map contribute no relevant points.
    std::vector<std::map<std::size_t, double>> minority_rules;
    std::uint64_t seed = 1;
};

/// @throws invalid_argument_error on zero blobs, non-positive spreads,
///         fractions outside (0,1), or references to unknown blobs.
[[nodiscard]] MultiLabelDataset generate_toy(const ToyConfig &cfg);

/// Five blobs, 1,000 points, two labels with imbalance ratios near 25 and 14. Minority
/// points of each label sit in two blobs separated by majority-only blobs.
[[nodiscard]] ToyConfig five_blob_config(std::uint64_t seed = 1);

}  // namespace uclso

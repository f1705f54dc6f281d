#pragma once

#include "phqchat/dataset.hpp"
#include "phqchat/stats.hpp"

#include <cstdint>
#include <optional>

namespace phqchat {

struct SyntheticOptions {
    std::size_t n = 108;
    /// When set, subjects are laid out so that form class (truth) against agent
    /// class (prediction) reproduces these counts exactly, and `n` is ignored.
    std::optional<stats::ConfusionMatrix> cells;
    /// Mean |agent total - form total| over the dataset, hit to within 0.5 / n.
    double mean_abs_noise = 1.88;
    std::uint64_t seed = 1;
    int max_days = 14;
};

/// Deterministic paired dataset: the same options give the same bytes on every
/// platform. Agent items are derived from form items by moving points up or down,
/// so item-level agreement stays realistic.
PairedDataset make_synthetic_dataset(const SyntheticOptions& options);

}  // namespace phqchat

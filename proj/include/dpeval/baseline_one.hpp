#pragma once

#include <vector>

#include "dpeval/dataset.hpp"
#include "dpeval/ranking.hpp"

namespace dpeval {

/// Size-based global baseline. Modules are ranked by descending SLOC, except
/// that the largest modules (set E, holding at most excluded_code_size_percentage
/// of the project's code) are moved to the bottom in ascending SLOC order.
struct OneConfig {
    double excluded_code_size_percentage = 0.20;
};

/// Throws UsageError unless the percentage is in [0, 1).
void validate(const OneConfig& config);

/// Positions (indices into ReleaseDataset::modules) of the excluded set E,
/// largest first. E is the longest run of largest modules whose cumulative
/// SLOC stays within the budget; it is empty when the largest module alone
/// exceeds it. Ties in SLOC are taken by ascending id.
std::vector<std::size_t> one_excluded_set(const ReleaseDataset& dataset, const OneConfig& config);

/// Reads only module SLOC; labels and metrics are ignored. Scores are
/// strictly decreasing ordinals (k, k-1, ..., 1).
Ranking one_ranking(const ReleaseDataset& dataset, const OneConfig& config = {});

/// one_ranking followed by the effort-aligned cut. Needs labels.
InspectionResult one_classify(const ReleaseDataset& dataset, const OneConfig& config = {},
                              const EffortBudget& budget = {});

}  // namespace dpeval

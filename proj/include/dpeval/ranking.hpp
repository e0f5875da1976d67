#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpeval/dataset.hpp"

namespace dpeval {

/// Modules of one release ordered from most to least predicted defect-prone.
struct Ranking {
    std::string release;   ///< ReleaseDataset::name() of the ranked release
    std::string producer;  ///< model name
    /// Indices into ReleaseDataset::modules; a permutation of 0..k-1.
    std::vector<std::size_t> order;
    /// Score of order[i]; non-increasing.
    std::vector<double> scores;

    std::size_t size() const { return order.size(); }
    std::vector<std::string> ids(const ReleaseDataset& dataset) const;

    bool operator==(const Ranking&) const = default;
};

/// Sorts modules by score descending, equal scores by ascending module id.
Ranking rank_by_score(const ReleaseDataset& dataset, const std::vector<double>& module_scores,
                      std::string producer);

/// Throws DataError unless the ranking is a permutation of the release's
/// modules with finite, non-increasing scores.
void validate_ranking(const Ranking& ranking, const ReleaseDataset& dataset);

enum class BudgetKind { kSnm, kSsc };

std::string to_string(BudgetKind kind);
BudgetKind parse_budget_kind(const std::string& text);

/// SNM fixes the fraction of inspected modules, SSC the fraction of inspected code.
struct EffortBudget {
    BudgetKind kind = BudgetKind::kSnm;
    double fraction = 0.2;

    bool operator==(const EffortBudget&) const = default;
};

/// Throws UsageError unless fraction is in (0, 1].
void validate_budget(const EffortBudget& budget);

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    bool operator==(const ConfusionMatrix&) const = default;
};

struct InspectionResult {
    std::string release;
    std::string producer;
    EffortBudget budget;
    std::size_t x = 0;  ///< modules classified defective (ranking prefix length)
    double pii = 0.0;   ///< x / k
    double pci = 0.0;   ///< prefix sloc / s
    ConfusionMatrix confusion;
    /// Set when the budget admits no module at all (x = 0).
    bool degenerate = false;
};

/// Defectives in the first x modules of the ranking and the derived counts.
ConfusionMatrix confusion_of_prefix(const Ranking& ranking, const ReleaseDataset& dataset, std::size_t x);

/// Largest x with x/k <= fraction.
std::size_t snm_prefix_length(std::size_t k, double fraction);
/// Longest prefix whose cumulative sloc / s <= fraction.
std::size_t ssc_prefix_length(const Ranking& ranking, const ReleaseDataset& dataset, double fraction);

InspectionResult cut_snm(const Ranking& ranking, const ReleaseDataset& dataset, double fraction);
InspectionResult cut_ssc(const Ranking& ranking, const ReleaseDataset& dataset, double fraction);
InspectionResult cut(const Ranking& ranking, const ReleaseDataset& dataset, const EffortBudget& budget);

/// Reads an `id,score` CSV covering every module exactly once.
Ranking import_external_ranking(const std::string& path, const ReleaseDataset& dataset,
                                std::string producer = "external");

}  // namespace dpeval

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dpeval::stats {

enum class Polarity { kHigherBetter, kLowerBetter };

/// Polarity of a result indicator (eifa, pf, pii, ... are lower-better).
Polarity default_polarity(const std::string& indicator);

/// Model x dataset grid of indicator values; nullopt marks an undefined cell.
struct PerformanceMatrix {
    std::vector<std::string> models;
    std::vector<std::string> datasets;
    std::vector<std::vector<std::optional<double>>> values;  ///< [model][dataset]
    Polarity polarity = Polarity::kHigherBetter;
};

struct RankMatrix {
    std::vector<std::string> models;
    std::vector<std::string> datasets;
    std::vector<std::vector<double>> ranks;       ///< [model][dataset], 1 = best
    std::vector<std::vector<bool>> undefined;     ///< cells ranked worst by rule

    std::vector<double> mean_ranks() const;
};

/// Average ranks of a sample (1 = smallest value), ties sharing the mid-rank.
std::vector<double> mid_ranks(std::span<const double> values);

/// Per dataset, ranks models 1 = best by polarity with mid-ranks for ties.
/// Undefined cells share the worst ranks and are flagged. Throws UsageError
/// with fewer than 2 models or a column with fewer than 2 defined values.
RankMatrix rank_transform(const PerformanceMatrix& matrix);

enum class Magnitude { kNegligible, kSmall, kMedium, kLarge };

std::string to_string(Magnitude magnitude);

/// negligible < 0.147 <= small < 0.33 <= medium < 0.474 <= large, on |delta|.
Magnitude magnitude_of(double delta);

struct CliffResult {
    double delta = 0.0;
    Magnitude magnitude = Magnitude::kNegligible;
};

/// (#{x > y} - #{x < y}) / (|xs| |ys|) over all pairs.
CliffResult cliffs_delta(std::span<const double> xs, std::span<const double> ys);

/// Pearson correlation of mid-ranks; nullopt when either input is constant.
std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys);

/// Kendall tau-b; nullopt when either input is constant.
std::optional<double> kendall(std::span<const double> xs, std::span<const double> ys);

constexpr double kNegligibleDelta = 0.147;

struct SkEntry {
    std::string model;
    double mean_rank = 0.0;
    int group = 0;
};

struct SkGrouping {
    std::vector<SkEntry> entries;  ///< best mean rank first
    RankMatrix ranks;
    int group_count() const { return entries.empty() ? 0 : entries.back().group; }
    /// Entry for a model; throws UsageError when absent.
    const SkEntry& at(const std::string& model) const;
};

/// Rank-based Scott-Knott with effect-size acceptance. Models are ordered by
/// mean rank and split recursively where the between-group sum of squares
/// of mean ranks peaks; a split stands only if Cliff's |delta| between the
/// two halves' pooled rank samples is non-negligible. Adjacent groups that
/// end up negligibly different are then merged, smallest |delta| first.
SkGrouping scott_knott_esd(const PerformanceMatrix& matrix);

/// Cliff's delta between every pair of models' per-dataset rank samples,
/// [row][column] = delta(row ranks, column ranks).
std::vector<std::vector<double>> pairwise_delta(const RankMatrix& ranks);

struct RankAgreement {
    std::optional<double> spearman;
    std::optional<double> kendall;
};

/// Correlation of the group numbers two groupings give the models they share.
RankAgreement grouping_agreement(const SkGrouping& a, const SkGrouping& b);

}  // namespace dpeval::stats

#include "dpeval/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "dpeval/errors.hpp"

namespace dpeval::stats {

Polarity default_polarity(const std::string& indicator) {
    static const char* lower_better[] = {"eifa", "y", "ifa", "pci_ifa", "pii_ifa", "pf",
                                         "fp",   "fn", "pii", "pci"};
    for (const char* name : lower_better)
        if (indicator == name) return Polarity::kLowerBetter;
    return Polarity::kHigherBetter;
}

std::vector<double> RankMatrix::mean_ranks() const {
    std::vector<double> means;
    for (const auto& row : ranks)
        means.push_back(std::accumulate(row.begin(), row.end(), 0.0) / static_cast<double>(row.size()));
    return means;
}

std::vector<double> mid_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = rank;
        i = j + 1;
    }
    return ranks;
}

RankMatrix rank_transform(const PerformanceMatrix& matrix) {
    const std::size_t m = matrix.models.size();
    const std::size_t d = matrix.datasets.size();
    if (m < 2) throw UsageError("rank transform needs at least 2 models");
    if (matrix.values.size() != m) throw UsageError("performance matrix has inconsistent dimensions");
    for (const auto& row : matrix.values)
        if (row.size() != d) throw UsageError("performance matrix has inconsistent dimensions");

    RankMatrix out;
    out.models = matrix.models;
    out.datasets = matrix.datasets;
    out.ranks.assign(m, std::vector<double>(d, 0.0));
    out.undefined.assign(m, std::vector<bool>(d, false));
    const double sign = matrix.polarity == Polarity::kHigherBetter ? -1.0 : 1.0;
    for (std::size_t c = 0; c < d; ++c) {
        std::vector<std::size_t> defined;
        std::vector<double> keyed;
        for (std::size_t r = 0; r < m; ++r) {
            if (matrix.values[r][c]) {
                defined.push_back(r);
                keyed.push_back(sign * *matrix.values[r][c]);
            }
        }
        if (defined.size() < 2)
            throw UsageError("dataset '" + matrix.datasets[c] + "' has fewer than 2 defined values");
        const auto ranks = mid_ranks(keyed);
        for (std::size_t t = 0; t < defined.size(); ++t) out.ranks[defined[t]][c] = ranks[t];
        const std::size_t missing = m - defined.size();
        const double worst = (static_cast<double>(defined.size() + 1) + static_cast<double>(m)) / 2.0;
        if (missing > 0)
            for (std::size_t r = 0; r < m; ++r)
                if (!matrix.values[r][c]) {
                    out.ranks[r][c] = worst;
                    out.undefined[r][c] = true;
                }
    }
    return out;
}

std::string to_string(Magnitude magnitude) {
    switch (magnitude) {
        case Magnitude::kNegligible: return "negligible";
        case Magnitude::kSmall: return "small";
        case Magnitude::kMedium: return "medium";
        case Magnitude::kLarge: return "large";
    }
    return "unknown";
}

Magnitude magnitude_of(double delta) {
    const double a = std::fabs(delta);
    if (a < kNegligibleDelta) return Magnitude::kNegligible;
    if (a < 0.33) return Magnitude::kSmall;
    if (a < 0.474) return Magnitude::kMedium;
    return Magnitude::kLarge;
}

CliffResult cliffs_delta(std::span<const double> xs, std::span<const double> ys) {
    if (xs.empty() || ys.empty()) throw UsageError("cliff's delta needs two non-empty samples");
    std::vector<double> sorted(ys.begin(), ys.end());
    std::sort(sorted.begin(), sorted.end());
    std::int64_t greater = 0, less = 0;
    for (double x : xs) {
        less += sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
        greater += std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
    }
    const double pairs = static_cast<double>(xs.size()) * static_cast<double>(ys.size());
    const double delta = static_cast<double>(greater - less) / pairs;
    return {delta, magnitude_of(delta)};
}

std::optional<double> spearman(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw UsageError("spearman needs equal-length inputs of size >= 2");
    const auto rx = mid_ranks(xs);
    const auto ry = mid_ranks(ys);
    const double n = static_cast<double>(rx.size());
    const double mean = (n + 1.0) / 2.0;  // mid-ranks always sum to n(n+1)/2
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

namespace {

std::int64_t tied_pairs(const std::vector<double>& sorted) {
    std::int64_t total = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const auto t = static_cast<std::int64_t>(j - i);
        total += t * (t - 1) / 2;
        i = j;
    }
    return total;
}

// Sorts in place, returning the number of inversions.
std::int64_t merge_count(std::vector<double>& v, std::vector<double>& buffer, std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return 0;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::int64_t swaps = merge_count(v, buffer, lo, mid) + merge_count(v, buffer, mid, hi);
    std::size_t i = lo, j = mid, out = lo;
    while (i < mid && j < hi) {
        if (v[j] < v[i]) {
            swaps += static_cast<std::int64_t>(mid - i);
            buffer[out++] = v[j++];
        } else {
            buffer[out++] = v[i++];
        }
    }
    while (i < mid) buffer[out++] = v[i++];
    while (j < hi) buffer[out++] = v[j++];
    std::copy(buffer.begin() + static_cast<std::ptrdiff_t>(lo), buffer.begin() + static_cast<std::ptrdiff_t>(hi),
              v.begin() + static_cast<std::ptrdiff_t>(lo));
    return swaps;
}

}  // namespace

std::optional<double> kendall(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw UsageError("kendall needs equal-length inputs of size >= 2");
    const std::size_t n = xs.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        return xs[a] != xs[b] ? xs[a] < xs[b] : ys[a] < ys[b];
    });
    std::vector<double> x_sorted(n), y_by_x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x_sorted[i] = xs[idx[i]];
        y_by_x[i] = ys[idx[i]];
    }
    const auto total = static_cast<std::int64_t>(n * (n - 1) / 2);
    const std::int64_t x_ties = tied_pairs(x_sorted);
    std::int64_t joint_ties = 0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && x_sorted[j] == x_sorted[i] && y_by_x[j] == y_by_x[i]) ++j;
        const auto t = static_cast<std::int64_t>(j - i);
        joint_ties += t * (t - 1) / 2;
        i = j;
    }
    std::vector<double> buffer(n);
    const std::int64_t discordant = merge_count(y_by_x, buffer, 0, n);
    const std::int64_t y_ties = tied_pairs(y_by_x);
    if (total == x_ties || total == y_ties) return std::nullopt;
    const std::int64_t concordant_minus_discordant = total - x_ties - y_ties + joint_ties - 2 * discordant;
    const double denom = std::sqrt(static_cast<double>(total - x_ties) * static_cast<double>(total - y_ties));
    return std::clamp(static_cast<double>(concordant_minus_discordant) / denom, -1.0, 1.0);
}

const SkEntry& SkGrouping::at(const std::string& model) const {
    for (const auto& e : entries)
        if (e.model == model) return e;
    throw UsageError("model '" + model + "' not in grouping");
}

namespace {

std::vector<double> pooled(const RankMatrix& ranks, const std::vector<std::size_t>& order, std::size_t lo,
                           std::size_t hi) {
    std::vector<double> sample;
    for (std::size_t p = lo; p < hi; ++p) {
        const auto& row = ranks.ranks[order[p]];
        sample.insert(sample.end(), row.begin(), row.end());
    }
    return sample;
}

void partition(const RankMatrix& ranks, const std::vector<std::size_t>& order, const std::vector<double>& means,
               std::size_t lo, std::size_t hi, std::vector<std::size_t>& boundaries) {
    if (hi - lo < 2) return;
    double total = 0.0;
    for (std::size_t p = lo; p < hi; ++p) total += means[order[p]];
    const double grand = total / static_cast<double>(hi - lo);
    double best = -1.0;
    std::size_t split = lo + 1;
    double left_sum = 0.0;
    for (std::size_t cut = lo + 1; cut < hi; ++cut) {
        left_sum += means[order[cut - 1]];
        const double n1 = static_cast<double>(cut - lo);
        const double n2 = static_cast<double>(hi - cut);
        const double m1 = left_sum / n1;
        const double m2 = (total - left_sum) / n2;
        const double between = n1 * (m1 - grand) * (m1 - grand) + n2 * (m2 - grand) * (m2 - grand);
        if (between > best) {
            best = between;
            split = cut;
        }
    }
    const auto effect = cliffs_delta(pooled(ranks, order, lo, split), pooled(ranks, order, split, hi));
    if (std::fabs(effect.delta) < kNegligibleDelta) return;
    partition(ranks, order, means, lo, split, boundaries);
    boundaries.push_back(split);
    partition(ranks, order, means, split, hi, boundaries);
}

}  // namespace

SkGrouping scott_knott_esd(const PerformanceMatrix& matrix) {
    if (matrix.models.size() < 2 || matrix.datasets.size() < 2)
        throw UsageError("scott-knott needs at least 2 models and 2 datasets");
    SkGrouping out;
    out.ranks = rank_transform(matrix);
    const auto means = out.ranks.mean_ranks();
    const std::size_t m = means.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return means[a] < means[b]; });

    std::vector<std::size_t> boundaries;
    partition(out.ranks, order, means, 0, m, boundaries);

    // Group g spans [starts[g], starts[g+1]).
    std::vector<std::size_t> starts{0};
    starts.insert(starts.end(), boundaries.begin(), boundaries.end());
    starts.push_back(m);
    while (starts.size() > 2) {
        double weakest = kNegligibleDelta;
        std::size_t merge_at = 0;
        for (std::size_t g = 1; g + 1 < starts.size(); ++g) {
            const auto effect = cliffs_delta(pooled(out.ranks, order, starts[g - 1], starts[g]),
                                             pooled(out.ranks, order, starts[g], starts[g + 1]));
            if (std::fabs(effect.delta) < weakest) {
                weakest = std::fabs(effect.delta);
                merge_at = g;
            }
        }
        if (merge_at == 0) break;
        starts.erase(starts.begin() + static_cast<std::ptrdiff_t>(merge_at));
    }

    int group = 0;
    for (std::size_t g = 0; g + 1 < starts.size(); ++g) {
        ++group;
        for (std::size_t p = starts[g]; p < starts[g + 1]; ++p)
            out.entries.push_back({out.ranks.models[order[p]], means[order[p]], group});
    }
    return out;
}

std::vector<std::vector<double>> pairwise_delta(const RankMatrix& ranks) {
    const std::size_t m = ranks.models.size();
    std::vector<std::vector<double>> out(m, std::vector<double>(m, 0.0));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            if (a != b) out[a][b] = cliffs_delta(ranks.ranks[a], ranks.ranks[b]).delta;
    return out;
}

RankAgreement grouping_agreement(const SkGrouping& a, const SkGrouping& b) {
    std::vector<double> ga, gb;
    for (const auto& e : a.entries) {
        for (const auto& f : b.entries) {
            if (e.model == f.model) {
                ga.push_back(e.group);
                gb.push_back(f.group);
            }
        }
    }
    if (ga.size() < 2) throw UsageError("groupings share fewer than 2 models");
    return {spearman(ga, gb), kendall(ga, gb)};
}

}  // namespace dpeval::stats

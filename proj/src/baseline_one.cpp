#include "dpeval/baseline_one.hpp"

#include <algorithm>
#include <numeric>

#include "dpeval/csv.hpp"
#include "dpeval/errors.hpp"

namespace dpeval {

namespace {

std::vector<std::size_t> by_size_descending(const ReleaseDataset& dataset) {
    std::vector<std::size_t> order(dataset.k());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& ma = dataset.modules[a];
        const auto& mb = dataset.modules[b];
        if (ma.sloc != mb.sloc) return ma.sloc > mb.sloc;
        return ma.id < mb.id;
    });
    return order;
}

std::vector<std::size_t> excluded_prefix(const ReleaseDataset& dataset, const std::vector<std::size_t>& descending,
                                         double percentage) {
    const double s = static_cast<double>(dataset.s());
    std::int64_t cumulative = 0;
    std::vector<std::size_t> excluded;
    for (auto i : descending) {
        cumulative += dataset.modules[i].sloc;
        if (static_cast<double>(cumulative) / s > percentage) break;
        excluded.push_back(i);
    }
    return excluded;
}

}  // namespace

void validate(const OneConfig& config) {
    const double p = config.excluded_code_size_percentage;
    if (!(p >= 0.0 && p < 1.0))
        throw UsageError("excluded code size percentage " + csv::format_number(p) + " outside [0, 1)");
}

std::vector<std::size_t> one_excluded_set(const ReleaseDataset& dataset, const OneConfig& config) {
    validate(config);
    return excluded_prefix(dataset, by_size_descending(dataset), config.excluded_code_size_percentage);
}

Ranking one_ranking(const ReleaseDataset& dataset, const OneConfig& config) {
    validate(config);
    const auto descending = by_size_descending(dataset);
    const auto excluded = excluded_prefix(dataset, descending, config.excluded_code_size_percentage);

    Ranking r;
    r.release = dataset.name();
    r.producer = "one";
    r.order.assign(descending.begin() + static_cast<std::ptrdiff_t>(excluded.size()), descending.end());
    // E goes to the bottom smallest-first; equal sizes stay in ascending id order.
    std::vector<std::size_t> tail = excluded;
    std::stable_sort(tail.begin(), tail.end(), [&](std::size_t a, std::size_t b) {
        const auto& ma = dataset.modules[a];
        const auto& mb = dataset.modules[b];
        if (ma.sloc != mb.sloc) return ma.sloc < mb.sloc;
        return ma.id < mb.id;
    });
    r.order.insert(r.order.end(), tail.begin(), tail.end());
    const std::size_t k = r.order.size();
    r.scores.reserve(k);
    for (std::size_t p = 0; p < k; ++p) r.scores.push_back(static_cast<double>(k - p));
    return r;
}

InspectionResult one_classify(const ReleaseDataset& dataset, const OneConfig& config, const EffortBudget& budget) {
    return cut(one_ranking(dataset, config), dataset, budget);
}

}  // namespace dpeval

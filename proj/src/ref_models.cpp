#include "dpeval/ref_models.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "dpeval/errors.hpp"

namespace dpeval {

ModelOutput manual_down(const ReleaseDataset& dataset) {
    std::vector<double> scores;
    scores.reserve(dataset.k());
    for (const auto& m : dataset.modules) scores.push_back(static_cast<double>(m.sloc));
    return ModelOutput{rank_by_score(dataset, scores, "manualdown"), std::nullopt, {}};
}

ModelOutput manual_up(const ReleaseDataset& dataset) {
    std::vector<double> scores;
    scores.reserve(dataset.k());
    for (const auto& m : dataset.modules) scores.push_back(1.0 / static_cast<double>(m.sloc));
    return ModelOutput{rank_by_score(dataset, scores, "manualup"), std::nullopt, {}};
}

std::vector<std::size_t> cla_counts(const ReleaseDataset& dataset) {
    if (dataset.metric_names.empty()) throw ModelError("cla needs at least one metric in " + dataset.name());
    const std::size_t k = dataset.k();
    std::vector<std::size_t> counts(k, 0);
    std::vector<double> column(k);
    for (std::size_t j = 0; j < dataset.metric_names.size(); ++j) {
        for (std::size_t i = 0; i < k; ++i) column[i] = dataset.modules[i].metrics[j];
        std::sort(column.begin(), column.end());
        const double median = k % 2 ? column[k / 2] : (column[k / 2 - 1] + column[k / 2]) / 2.0;
        for (std::size_t i = 0; i < k; ++i)
            if (dataset.modules[i].metrics[j] > median) ++counts[i];
    }
    return counts;
}

ModelOutput cla(const ReleaseDataset& dataset) {
    const auto counts = cla_counts(dataset);
    const std::size_t k = dataset.k();

    const std::set<std::size_t, std::greater<>> distinct(counts.begin(), counts.end());
    const std::size_t top = (distinct.size() + 1) / 2;
    const std::size_t cutoff = *std::next(distinct.begin(), static_cast<std::ptrdiff_t>(top - 1));

    ModelOutput out;
    out.intrinsic_labels = std::vector<bool>(k);
    for (std::size_t i = 0; i < k; ++i) (*out.intrinsic_labels)[i] = counts[i] >= cutoff;
    for (auto value : distinct)
        out.diagnostics.cluster_sizes.push_back(
            static_cast<std::size_t>(std::count(counts.begin(), counts.end(), value)));

    Ranking& r = out.ranking;
    r.release = dataset.name();
    r.producer = "cla";
    r.order.resize(k);
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
        if (counts[a] != counts[b]) return counts[a] > counts[b];
        const auto& ma = dataset.modules[a];
        const auto& mb = dataset.modules[b];
        if (ma.sloc != mb.sloc) return ma.sloc > mb.sloc;
        return ma.id < mb.id;
    });
    for (auto i : r.order) r.scores.push_back(static_cast<double>(counts[i]));
    return out;
}

}  // namespace dpeval

#include "dpeval/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "dpeval/csv.hpp"
#include "dpeval/errors.hpp"

namespace dpeval {

std::vector<std::string> Ranking::ids(const ReleaseDataset& dataset) const {
    std::vector<std::string> out;
    out.reserve(order.size());
    for (auto i : order) out.push_back(dataset.modules.at(i).id);
    return out;
}

Ranking rank_by_score(const ReleaseDataset& dataset, const std::vector<double>& module_scores,
                      std::string producer) {
    if (module_scores.size() != dataset.k()) throw DataError("score count does not match module count");
    Ranking r;
    r.release = dataset.name();
    r.producer = std::move(producer);
    r.order.resize(dataset.k());
    std::iota(r.order.begin(), r.order.end(), std::size_t{0});
    std::sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
        if (module_scores[a] != module_scores[b]) return module_scores[a] > module_scores[b];
        return dataset.modules[a].id < dataset.modules[b].id;
    });
    r.scores.reserve(r.order.size());
    for (auto i : r.order) r.scores.push_back(module_scores[i]);
    return r;
}

void validate_ranking(const Ranking& ranking, const ReleaseDataset& dataset) {
    const std::size_t k = dataset.k();
    if (ranking.order.size() != k || ranking.scores.size() != k)
        throw DataError("ranking size does not match release " + dataset.name());
    std::vector<bool> seen(k, false);
    for (std::size_t p = 0; p < k; ++p) {
        const auto i = ranking.order[p];
        if (i >= k || seen[i]) throw DataError("ranking is not a permutation of the release modules");
        seen[i] = true;
        if (!std::isfinite(ranking.scores[p])) throw DataError("non-finite ranking score");
        if (p > 0 && ranking.scores[p] > ranking.scores[p - 1])
            throw DataError("ranking scores increase at position " + std::to_string(p));
    }
}

std::string to_string(BudgetKind kind) { return kind == BudgetKind::kSnm ? "snm" : "ssc"; }

BudgetKind parse_budget_kind(const std::string& text) {
    if (text == "snm" || text == "SNM") return BudgetKind::kSnm;
    if (text == "ssc" || text == "SSC") return BudgetKind::kSsc;
    throw UsageError("unknown budget kind '" + text + "' (expected snm or ssc)");
}

void validate_budget(const EffortBudget& budget) {
    if (!(budget.fraction > 0.0 && budget.fraction <= 1.0))
        throw UsageError("budget fraction " + csv::format_number(budget.fraction) + " outside (0, 1]");
}

ConfusionMatrix confusion_of_prefix(const Ranking& ranking, const ReleaseDataset& dataset, std::size_t x) {
    const std::size_t k = dataset.k();
    if (x > k) throw DataError("prefix length " + std::to_string(x) + " exceeds module count");
    if (ranking.order.size() != k) throw DataError("ranking does not match release " + dataset.name());
    const std::size_t n = dataset.n();
    ConfusionMatrix cm;
    for (std::size_t p = 0; p < x; ++p)
        if (*dataset.modules[ranking.order[p]].label) ++cm.tp;
    cm.fp = x - cm.tp;
    cm.fn = n - cm.tp;
    cm.tn = k - x - cm.fn;
    return cm;
}

std::size_t snm_prefix_length(std::size_t k, double fraction) {
    const double kd = static_cast<double>(k);
    auto fits = [&](std::size_t x) { return static_cast<double>(x) / kd <= fraction; };
    auto x = static_cast<std::size_t>(std::min(kd, std::max(0.0, std::floor(fraction * kd))));
    // floor(fraction * k) can land one off when the product rounds across an integer.
    while (x > 0 && !fits(x)) --x;
    while (x < k && fits(x + 1)) ++x;
    return x;
}

std::size_t ssc_prefix_length(const Ranking& ranking, const ReleaseDataset& dataset, double fraction) {
    const double s = static_cast<double>(dataset.s());
    std::int64_t cumulative = 0;
    std::size_t x = 0;
    for (auto i : ranking.order) {
        cumulative += dataset.modules[i].sloc;
        if (static_cast<double>(cumulative) / s > fraction) break;
        ++x;
    }
    return x;
}

namespace {

InspectionResult inspect(const Ranking& ranking, const ReleaseDataset& dataset, const EffortBudget& budget,
                         std::size_t x) {
    InspectionResult r;
    r.release = ranking.release;
    r.producer = ranking.producer;
    r.budget = budget;
    r.x = x;
    r.confusion = confusion_of_prefix(ranking, dataset, x);
    std::int64_t prefix_sloc = 0;
    for (std::size_t p = 0; p < x; ++p) prefix_sloc += dataset.modules[ranking.order[p]].sloc;
    r.pii = static_cast<double>(x) / static_cast<double>(dataset.k());
    r.pci = static_cast<double>(prefix_sloc) / static_cast<double>(dataset.s());
    r.degenerate = x == 0;
    return r;
}

}  // namespace

InspectionResult cut_snm(const Ranking& ranking, const ReleaseDataset& dataset, double fraction) {
    const EffortBudget budget{BudgetKind::kSnm, fraction};
    validate_budget(budget);
    return inspect(ranking, dataset, budget, snm_prefix_length(dataset.k(), fraction));
}

InspectionResult cut_ssc(const Ranking& ranking, const ReleaseDataset& dataset, double fraction) {
    const EffortBudget budget{BudgetKind::kSsc, fraction};
    validate_budget(budget);
    return inspect(ranking, dataset, budget, ssc_prefix_length(ranking, dataset, fraction));
}

InspectionResult cut(const Ranking& ranking, const ReleaseDataset& dataset, const EffortBudget& budget) {
    return budget.kind == BudgetKind::kSnm ? cut_snm(ranking, dataset, budget.fraction)
                                           : cut_ssc(ranking, dataset, budget.fraction);
}

Ranking import_external_ranking(const std::string& path, const ReleaseDataset& dataset, std::string producer) {
    const csv::Table table = csv::read_file(path);
    if (table.header.size() < 2) throw DataError(path + ": expected columns id,score");
    const std::size_t id_col = table.column("id").value_or(0);
    const std::size_t score_col = table.column("score").value_or(1);

    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < dataset.k(); ++i) index.emplace(dataset.modules[i].id, i);

    std::vector<double> scores(dataset.k());
    std::vector<bool> covered(dataset.k(), false);
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& id = table.rows[r][id_col];
        const std::string where = " at row " + std::to_string(r + 1);
        auto it = index.find(id);
        if (it == index.end()) throw DataError(path + ": unknown module id '" + id + "'" + where);
        if (covered[it->second]) throw DataError(path + ": duplicate module id '" + id + "'" + where);
        auto score = csv::parse_double(table.rows[r][score_col]);
        if (!score || !std::isfinite(*score)) throw DataError(path + ": non-finite score for '" + id + "'" + where);
        scores[it->second] = *score;
        covered[it->second] = true;
    }
    for (std::size_t i = 0; i < dataset.k(); ++i)
        if (!covered[i]) throw DataError(path + ": missing score for module id '" + dataset.modules[i].id + "'");
    return rank_by_score(dataset, scores, std::move(producer));
}

}  // namespace dpeval

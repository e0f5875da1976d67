#include "dpeval/indicators.hpp"

#include <cmath>

#include "dpeval/errors.hpp"

namespace dpeval {

namespace {

double ratio(std::size_t num, std::size_t den) { return static_cast<double>(num) / static_cast<double>(den); }

IndicatorValue harmonic(const IndicatorValue& a, const IndicatorValue& b) {
    if (!a.defined()) return a;
    if (!b.defined()) return b;
    const double sum = *a.value + *b.value;
    return IndicatorValue::of(sum == 0.0 ? 0.0 : 2.0 * *a.value * *b.value / sum);
}

void check_weight(double a) {
    if (!(a >= 0.0 && a <= 1.0)) throw UsageError("effort weight a must lie in [0, 1]");
}

double trapezoid(const std::vector<std::pair<double, double>>& points) {
    double area = 0.0;
    for (std::size_t i = 1; i < points.size(); ++i)
        area += (points[i].first - points[i - 1].first) * (points[i].second + points[i - 1].second) / 2.0;
    return area;
}

}  // namespace

IndicatorValue mcc(const ConfusionMatrix& cm) {
    const double predicted_pos = static_cast<double>(cm.tp + cm.fp);
    const double actual_pos = static_cast<double>(cm.tp + cm.fn);
    const double actual_neg = static_cast<double>(cm.tn + cm.fp);
    const double predicted_neg = static_cast<double>(cm.tn + cm.fn);
    if (predicted_pos == 0 || actual_pos == 0 || actual_neg == 0 || predicted_neg == 0)
        return {0.0, reason::kZeroMarginal};
    const double numerator = static_cast<double>(cm.tp) * static_cast<double>(cm.tn) -
                             static_cast<double>(cm.fp) * static_cast<double>(cm.fn);
    return IndicatorValue::of(numerator / std::sqrt(predicted_pos * actual_pos * actual_neg * predicted_neg));
}

IndicatorValue roi(const ConfusionMatrix& cm, double pii, double pci, RoiMode mode, double a) {
    if (cm.tp + cm.fp == 0) return IndicatorValue::undefined(reason::kEmptyPrefix);
    double effort = 0.0;
    switch (mode) {
        case RoiMode::kSnm: effort = pci; break;
        case RoiMode::kSsc: effort = pii; break;
        case RoiMode::kGeneral:
            check_weight(a);
            effort = a * pci + (1.0 - a) * pii;
            break;
    }
    if (effort == 0.0) return IndicatorValue::undefined(reason::kZeroDenominator);
    return IndicatorValue::of(static_cast<double>(cm.tp) / effort);
}

EifaResult eifa(const Ranking& ranking, const ReleaseDataset& dataset, double a) {
    check_weight(a);
    if (dataset.n() == 0) throw DataError("no defective modules in " + dataset.name());
    EifaResult r;
    std::int64_t sloc_before = 0;
    for (auto i : ranking.order) {
        if (*dataset.modules[i].label) break;
        ++r.y;
        sloc_before += dataset.modules[i].sloc;
    }
    r.pci_ifa = static_cast<double>(sloc_before) / static_cast<double>(dataset.s());
    r.pii_ifa = ratio(r.y, dataset.k());
    r.eifa = a * r.pii_ifa + (1.0 - a) * r.pci_ifa;
    return r;
}

ClassicSet classic_set(const ConfusionMatrix& cm) {
    ClassicSet c;
    c.recall = cm.tp + cm.fn ? IndicatorValue::of(ratio(cm.tp, cm.tp + cm.fn))
                             : IndicatorValue::undefined(reason::kNoDefective);
    c.precision = cm.tp + cm.fp ? IndicatorValue::of(ratio(cm.tp, cm.tp + cm.fp))
                                : IndicatorValue::undefined(reason::kEmptyPrefix);
    c.pf = cm.fp + cm.tn ? IndicatorValue::of(ratio(cm.fp, cm.fp + cm.tn))
                         : IndicatorValue::undefined(reason::kNoClean);
    c.f1 = harmonic(c.recall, c.precision);
    c.g1 = c.pf.defined() ? harmonic(c.recall, IndicatorValue::of(1.0 - *c.pf.value)) : c.pf;
    return c;
}

double recall_at_effort(const Ranking& ranking, const ReleaseDataset& dataset, double sloc_fraction) {
    const std::size_t n = dataset.n();
    if (n == 0) throw DataError("no defective modules in " + dataset.name());
    const auto inspection = cut_ssc(ranking, dataset, sloc_fraction);
    return ratio(inspection.confusion.tp, n);
}

AucCurves auc_curves(const Ranking& ranking, const ReleaseDataset& dataset) {
    const std::size_t k = dataset.k();
    const std::size_t n = dataset.n();
    const double s = static_cast<double>(dataset.s());
    AucCurves out;
    if (n == 0) {
        out.auc_loc_pd = out.auc_pf_pd = IndicatorValue::undefined(reason::kNoDefective);
        return out;
    }
    std::vector<std::pair<double, double>> loc{{0.0, 0.0}}, pf{{0.0, 0.0}};
    std::size_t tp = 0, fp = 0;
    std::int64_t cumulative = 0;
    for (auto i : ranking.order) {
        const auto& m = dataset.modules[i];
        cumulative += m.sloc;
        (*m.label ? tp : fp) += 1;
        const double recall = ratio(tp, n);
        loc.emplace_back(static_cast<double>(cumulative) / s, recall);
        if (k > n) pf.emplace_back(ratio(fp, k - n), recall);
    }
    out.auc_loc_pd = IndicatorValue::of(trapezoid(loc));
    out.auc_pf_pd = k > n ? IndicatorValue::of(trapezoid(pf)) : IndicatorValue::undefined(reason::kNoClean);
    return out;
}

IndicatorValue IndicatorReport::get(const std::string& name) const {
    const auto& cm = inspection.confusion;
    auto count = [](std::size_t v) { return IndicatorValue::of(static_cast<double>(v)); };
    if (name == "x") return count(inspection.x);
    if (name == "tp") return count(cm.tp);
    if (name == "fp") return count(cm.fp);
    if (name == "tn") return count(cm.tn);
    if (name == "fn") return count(cm.fn);
    if (name == "pii") return IndicatorValue::of(inspection.pii);
    if (name == "pci") return IndicatorValue::of(inspection.pci);
    if (name == "mcc") return mcc;
    if (name == "roi") return roi;
    if (name == "roi_general") return roi_general;
    if (name == "eifa") return eifa;
    if (name == "y" || name == "ifa") return y;
    if (name == "pci_ifa") return pci_ifa;
    if (name == "pii_ifa") return pii_ifa;
    if (name == "recall") return classic.recall;
    if (name == "precision") return classic.precision;
    if (name == "pf") return classic.pf;
    if (name == "f1") return classic.f1;
    if (name == "g1") return classic.g1;
    if (name == "recall_at_effort") return recall_at_effort;
    if (name == "auc_loc_pd") return auc.auc_loc_pd;
    if (name == "auc_pf_pd") return auc.auc_pf_pd;
    throw UsageError("unknown indicator '" + name + "'");
}

IndicatorReport evaluate(const ModelOutput& output, const ReleaseDataset& dataset, const EffortBudget& budget,
                         const EvaluationParams& params) {
    const Ranking& ranking = output.ranking;
    validate_ranking(ranking, dataset);
    IndicatorReport report;
    report.producer = ranking.producer;
    report.release = dataset.name();
    report.eifa_weight = params.eifa_weight;
    report.inspection = cut(ranking, dataset, budget);
    const auto& insp = report.inspection;

    report.mcc = dpeval::mcc(insp.confusion);
    const RoiMode mode = budget.kind == BudgetKind::kSnm ? RoiMode::kSnm : RoiMode::kSsc;
    report.roi = dpeval::roi(insp.confusion, insp.pii, insp.pci, mode);
    if (params.general_roi_weight)
        report.roi_general = dpeval::roi(insp.confusion, insp.pii, insp.pci, RoiMode::kGeneral, *params.general_roi_weight);
    else
        report.roi_general = IndicatorValue::undefined("not requested");
    report.classic = classic_set(insp.confusion);
    report.auc = auc_curves(ranking, dataset);

    if (dataset.n() > 0) {
        const auto e = dpeval::eifa(ranking, dataset, params.eifa_weight);
        report.eifa = IndicatorValue::of(e.eifa);
        report.y = report.ifa_count = IndicatorValue::of(static_cast<double>(e.y));
        report.pci_ifa = IndicatorValue::of(e.pci_ifa);
        report.pii_ifa = IndicatorValue::of(e.pii_ifa);
        report.recall_at_effort =
            IndicatorValue::of(dpeval::recall_at_effort(ranking, dataset, params.recall_effort_fraction));
    } else {
        const auto none = IndicatorValue::undefined(reason::kNoDefective);
        report.eifa = report.y = report.ifa_count = report.pci_ifa = report.pii_ifa = report.recall_at_effort = none;
    }
    return report;
}

}  // namespace dpeval

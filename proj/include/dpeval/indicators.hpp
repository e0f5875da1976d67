#pragma once

#include <optional>
#include <string>

#include "dpeval/dataset.hpp"
#include "dpeval/ranking.hpp"
#include "dpeval/ref_models.hpp"

namespace dpeval {

/// An indicator value, or the reason it is undefined. A defined value may
/// still carry a note when a convention was applied (MCC on a zero marginal).
struct IndicatorValue {
    std::optional<double> value;
    std::string note;

    static IndicatorValue of(double v) { return {v, {}}; }
    static IndicatorValue undefined(std::string reason) { return {std::nullopt, std::move(reason)}; }
    bool defined() const { return value.has_value(); }

    bool operator==(const IndicatorValue&) const = default;
};

namespace reason {
inline constexpr const char* kZeroMarginal = "zero-marginal";
inline constexpr const char* kEmptyPrefix = "empty prefix";
inline constexpr const char* kZeroDenominator = "zero denominator";
inline constexpr const char* kNoDefective = "no defective modules";
inline constexpr const char* kNoClean = "no clean modules";
}  // namespace reason

/// Matthews correlation; 0 with note "zero-marginal" when any marginal sum is zero.
IndicatorValue mcc(const ConfusionMatrix& cm);

/// How the effort denominator of ROI is formed.
enum class RoiMode {
    kSnm,      ///< tp / pci
    kSsc,      ///< tp / pii
    kGeneral,  ///< tp / (a*pci + (1-a)*pii)
};

/// Defective modules found per unit of effort. Undefined on an empty prefix.
IndicatorValue roi(const ConfusionMatrix& cm, double pii, double pci, RoiMode mode, double a = 0.5);

struct EifaResult {
    double eifa = 0.0;
    std::size_t y = 0;  ///< modules ranked before the first defective one
    double pci_ifa = 0.0;
    double pii_ifa = 0.0;
};

/// Effort spent before the first defective module: a*pii_ifa + (1-a)*pci_ifa.
/// Throws DataError when the release has no defective module.
EifaResult eifa(const Ranking& ranking, const ReleaseDataset& dataset, double a = 0.5);

struct ClassicSet {
    IndicatorValue recall, precision, pf, f1, g1;
};

ClassicSet classic_set(const ConfusionMatrix& cm);

/// Recall of the cut_ssc prefix at the given code fraction (PofB at X%).
/// Throws DataError when the release has no defective module.
double recall_at_effort(const Ranking& ranking, const ReleaseDataset& dataset, double sloc_fraction);

struct AucCurves {
    IndicatorValue auc_loc_pd;  ///< x = inspected code fraction, y = recall
    IndicatorValue auc_pf_pd;   ///< x = false alarm rate, y = recall
};

/// Trapezoidal areas over the curve points of every prefix length 0..k.
AucCurves auc_curves(const Ranking& ranking, const ReleaseDataset& dataset);

struct EvaluationParams {
    double eifa_weight = 0.5;
    double recall_effort_fraction = 0.2;
    /// When set, also report ROI with the general weighted effort denominator.
    std::optional<double> general_roi_weight;
};

struct IndicatorReport {
    std::string producer;
    std::string release;
    InspectionResult inspection;
    IndicatorValue mcc;
    IndicatorValue roi;
    IndicatorValue roi_general;
    IndicatorValue eifa;
    IndicatorValue y;
    IndicatorValue pci_ifa;
    IndicatorValue pii_ifa;
    ClassicSet classic;
    IndicatorValue recall_at_effort;
    IndicatorValue ifa_count;
    AucCurves auc;
    double eifa_weight = 0.5;

    /// Lookup by result-column name ("mcc", "roi", "tp", "pii", ...);
    /// throws UsageError for unknown names.
    IndicatorValue get(const std::string& name) const;
};

/// Applies the budget's cut to the model ranking and fills every indicator.
/// eIFA, recall@effort and the AUCs are computed from the full ranking.
IndicatorReport evaluate(const ModelOutput& output, const ReleaseDataset& dataset, const EffortBudget& budget,
                         const EvaluationParams& params = {});

}  // namespace dpeval

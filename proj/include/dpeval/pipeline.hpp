#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dpeval/baseline_one.hpp"
#include "dpeval/dataset.hpp"
#include "dpeval/indicators.hpp"
#include "dpeval/ranking.hpp"
#include "dpeval/ref_models.hpp"
#include "dpeval/stats.hpp"

namespace dpeval {

inline constexpr const char* kToolName = "dpeval";
inline constexpr const char* kToolVersion = "0.1.0";

struct ReleaseEntry {
    std::string path;
    ColumnSpec columns;
    std::string project;
    std::string version;
};

enum class ModelKind { kOne, kManualDown, kManualUp, kCla, kFcm, kSc, kExternal };

struct ModelSpec {
    std::string name;  ///< label used in result rows
    ModelKind kind = ModelKind::kOne;
    /// Score file template for external models. {project}, {version},
    /// {release} and {stem} are substituted per release.
    std::string path;
};

/// Parses "one", "manualdown", "manualup", "cla", "fcm", "sc" or "external:<path>".
ModelSpec parse_model_spec(const std::string& text);

struct RunConfig {
    std::vector<ReleaseEntry> corpus;
    std::vector<ModelSpec> models;
    std::vector<EffortBudget> budgets{{BudgetKind::kSnm, 0.2}, {BudgetKind::kSsc, 0.2}};
    std::vector<std::string> indicators{"mcc", "roi", "eifa"};
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    OneConfig one;
    FcmParams fcm;
    SpectralParams sc;
    EvaluationParams evaluation;
    CorpusFilter filter;
    std::size_t workers = 1;
};

/// Reads a JSON run config. Relative paths resolve against the file's directory.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& json_text, const std::string& base_dir = ".");

/// Applies a seed override to the config and every stochastic model.
void set_seed(RunConfig& config, std::uint64_t seed);

/// Validates invariants: at least one release, model and budget; budgets in
/// (0, 1]; known indicators. Throws UsageError.
void validate_config(const RunConfig& config);

/// Stable hex digest of everything that affects results (not output_dir or workers).
std::string config_hash(const RunConfig& config);

/// Every indicator name accepted in RunConfig::indicators.
const std::vector<std::string>& known_indicators();

/// Runs one model on one release. Model failures surface as ModelError,
/// unreadable score files as DataError.
ModelOutput run_model(const ModelSpec& spec, const ReleaseDataset& dataset, const ReleaseEntry& entry,
                      const RunConfig& config);

std::vector<ReleaseDataset> load_corpus(const RunConfig& config);

struct ResultRow {
    std::string model;
    std::string release;
    std::size_t k = 0;
    std::size_t n = 0;
    std::int64_t s = 0;
    IndicatorReport report;
};

struct RunFailure {
    std::string model;
    std::string release;
    std::string message;
    bool data_error = false;  ///< DataError rather than ModelError
};

struct EvaluationRun {
    std::vector<ResultRow> rows;  ///< release, model, budget order of the config
    std::vector<RunFailure> failures;
};

/// Evaluates every (model, release, budget) triple on a worker pool. Output
/// order and content do not depend on the worker count.
EvaluationRun evaluate_corpus(const RunConfig& config, const std::vector<ReleaseDataset>& releases,
                              std::size_t workers);

struct Provenance {
    std::string tool;
    std::string version;
    std::uint64_t seed = 0;
    std::string config_hash;
};

Provenance provenance_of(const RunConfig& config);

/// Column header of results.csv for the selected indicators.
std::vector<std::string> result_columns(const std::vector<std::string>& indicators);
void write_results_csv(std::ostream& out, const EvaluationRun& run, const RunConfig& config);
void write_results_json(std::ostream& out, const EvaluationRun& run, const RunConfig& config);

/// One parsed line of a results.csv: column name -> raw cell.
struct ResultTable {
    Provenance provenance;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

ResultTable read_results(const std::string& path);

struct CompareOptions {
    std::string indicator = "mcc";
    std::optional<stats::Polarity> polarity;
    std::optional<BudgetKind> budget_kind;
    std::optional<double> budget_fraction;
    bool force = false;
    /// Second indicator whose grouping is correlated with the first.
    std::optional<std::string> correlate_with;
};

struct Comparison {
    EffortBudget budget;
    std::string indicator;
    stats::SkGrouping grouping;
    std::vector<std::string> dropped_datasets;
    std::optional<stats::SkGrouping> other;
    std::optional<stats::RankAgreement> agreement;
};

/// Builds the per-budget performance matrices from result tables.
std::vector<stats::PerformanceMatrix> performance_matrices(const std::vector<ResultTable>& tables,
                                                           const std::string& indicator, stats::Polarity polarity,
                                                           std::vector<EffortBudget>& budgets,
                                                           std::vector<std::vector<std::string>>& dropped);

/// Scott-Knott grouping per budget. Throws UsageError when the tables carry
/// different config hashes and force is off.
std::vector<Comparison> compare_results(const std::vector<ResultTable>& tables, const CompareOptions& options);

/// Writes sk_<indicator>_<budget>.csv/.json and delta_<indicator>_<budget>.csv.
std::vector<std::string> write_comparison(const Comparison& comparison, const Provenance& provenance,
                                          const std::string& out_dir);

enum class SweepAxis { kBudgetFraction, kExcludedPercentage };

struct SweepRow {
    double grid_value = 0.0;
    std::string model;
    std::string release;
    EffortBudget budget;
    std::string indicator;
    IndicatorValue value;
};

/// One evaluation pass per grid value, flattened to long format.
std::vector<SweepRow> sweep(const RunConfig& config, const std::vector<ReleaseDataset>& releases, SweepAxis axis,
                            const std::vector<double>& grid, std::size_t workers,
                            std::vector<RunFailure>* failures = nullptr);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, SweepAxis axis, const RunConfig& config);

struct ValidationEntry {
    std::string release;
    std::string path;
    bool loaded = false;
    std::size_t k = 0;
    std::size_t n = 0;
    std::vector<std::string> failures;
};

/// Loads every release and applies the corpus filter; never throws for bad data.
std::vector<ValidationEntry> validate_corpus(const RunConfig& config);

/// CSV with columns rank,id,sloc.
void write_one_ranking(std::ostream& out, const Ranking& ranking, const ReleaseDataset& dataset);

}  // namespace dpeval

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace dpeval {

/// One module (file, class or function) row of a release.
struct ModuleRecord {
    std::string id;
    std::int64_t sloc = 1;
    /// Absent when the release is unlabeled (model application stage).
    std::optional<bool> label;
    /// Values in the order of ReleaseDataset::metric_names.
    std::vector<double> metrics;

    bool operator==(const ModuleRecord&) const = default;
};

/// One software release. Construct with make_release() so the invariants
/// (unique ids, sloc >= 1, finite metrics, all-or-none labels) hold.
struct ReleaseDataset {
    std::string project;
    std::string version;
    std::vector<std::string> metric_names;
    std::vector<ModuleRecord> modules;

    std::size_t k() const { return modules.size(); }
    bool labeled() const;
    /// Number of defective modules. Throws DataError on unlabeled releases.
    std::size_t n() const;
    /// Total SLOC.
    std::int64_t s() const;
    /// "project/version", or whichever part is present.
    std::string name() const;

    bool operator==(const ReleaseDataset&) const = default;
};

/// Validates and returns a release. Throws DataError naming the first violation.
ReleaseDataset make_release(std::string project, std::string version,
                            std::vector<std::string> metric_names,
                            std::vector<ModuleRecord> modules);

/// Maps a CSV export onto the canonical schema.
struct ColumnSpec {
    std::string id_column = "id";
    std::string sloc_column = "sloc";
    std::optional<std::string> label_column;
    /// Empty means "all-remaining": every other column that holds numbers.
    std::vector<std::string> metric_columns;
    /// Columns never treated as metrics under "all-remaining".
    std::vector<std::string> ignore_columns;
};

/// Loads a release CSV. Label columns holding bug counts are binarized at
/// count > 0. Under "all-remaining", wholly non-numeric columns are skipped;
/// a numeric column with a bad cell is an error. Row numbers in errors are
/// 1-based data rows (the header is row 0).
ReleaseDataset load_release(const std::string& path, const ColumnSpec& spec,
                            std::string project = {}, std::string version = {});

/// Writes the canonical form: id, sloc, [label], metrics...
void write_release(const ReleaseDataset& dataset, const std::string& path);

struct CorpusFilter {
    std::size_t min_instances = 100;
    double min_defect_ratio = 0.05;
    std::size_t min_defective = 10;
};

/// Reasons a release fails the filter; empty when it passes.
std::vector<std::string> filter_failures(const ReleaseDataset& release, const CorpusFilter& filter);

/// Keeps the releases passing every threshold, in input order. Throws
/// DataError on an unlabeled release.
std::vector<ReleaseDataset> filter_corpus(const std::vector<ReleaseDataset>& releases,
                                          const CorpusFilter& filter = {});

/// Per-release z-scored metrics (population standard deviation).
struct StandardizedMetrics {
    std::vector<std::string> kept;
    std::vector<std::string> dropped;  ///< zero-variance metrics
    /// k rows of kept.size() values, in module order.
    std::vector<std::vector<double>> rows;
};

/// Throws DataError when k < 2 or every metric has zero variance.
StandardizedMetrics standardize_metrics(const ReleaseDataset& dataset);

}  // namespace dpeval

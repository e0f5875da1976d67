#include "dpeval/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <unordered_set>

#include "dpeval/csv.hpp"
#include "dpeval/errors.hpp"

namespace dpeval {

namespace {

std::string lower(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return text;
}

std::string at_row(std::size_t row, const std::string& column) {
    return " at row " + std::to_string(row) + ", column '" + column + "'";
}

std::optional<bool> parse_label(const std::string& cell) {
    if (auto count = csv::parse_double(cell)) {
        if (!std::isfinite(*count) || *count < 0) return std::nullopt;
        return *count > 0;
    }
    const std::string text = lower(cell);
    if (text == "true" || text == "yes" || text == "buggy" || text == "defective") return true;
    if (text == "false" || text == "no" || text == "clean") return false;
    return std::nullopt;
}

}  // namespace

bool ReleaseDataset::labeled() const {
    return !modules.empty() && modules.front().label.has_value();
}

std::size_t ReleaseDataset::n() const {
    if (!labeled()) throw DataError("release " + name() + " is unlabeled");
    return static_cast<std::size_t>(
        std::count_if(modules.begin(), modules.end(), [](const ModuleRecord& m) { return *m.label; }));
}

std::int64_t ReleaseDataset::s() const {
    std::int64_t total = 0;
    for (const auto& m : modules) total += m.sloc;
    return total;
}

std::string ReleaseDataset::name() const {
    if (project.empty()) return version;
    if (version.empty()) return project;
    return project + "/" + version;
}

ReleaseDataset make_release(std::string project, std::string version,
                            std::vector<std::string> metric_names,
                            std::vector<ModuleRecord> modules) {
    if (modules.empty()) throw DataError("release has no modules");
    std::unordered_set<std::string> ids;
    const bool labeled = modules.front().label.has_value();
    for (std::size_t i = 0; i < modules.size(); ++i) {
        const auto& m = modules[i];
        const std::string where = " at row " + std::to_string(i + 1);
        if (m.id.empty()) throw DataError("missing id" + where);
        if (!ids.insert(m.id).second) throw DataError("duplicate id '" + m.id + "'" + where);
        if (m.sloc < 1) throw DataError("non-positive sloc" + where);
        if (m.label.has_value() != labeled)
            throw DataError("labels must be present on all modules or none" + where);
        if (m.metrics.size() != metric_names.size())
            throw DataError("inconsistent metric count" + where);
        for (std::size_t j = 0; j < m.metrics.size(); ++j)
            if (!std::isfinite(m.metrics[j]))
                throw DataError("non-finite metric" + at_row(i + 1, metric_names[j]));
    }
    return ReleaseDataset{std::move(project), std::move(version), std::move(metric_names),
                          std::move(modules)};
}

ReleaseDataset load_release(const std::string& path, const ColumnSpec& spec, std::string project,
                            std::string version) {
    const csv::Table table = csv::read_file(path);
    auto require = [&](const std::string& name) {
        auto index = table.column(name);
        if (!index) throw DataError(path + ": missing column '" + name + "'");
        return *index;
    };
    {
        std::unordered_set<std::string> seen;
        for (const auto& h : table.header)
            if (!seen.insert(h).second) throw DataError(path + ": duplicate column '" + h + "'");
    }
    const std::size_t id_col = require(spec.id_column);
    const std::size_t sloc_col = require(spec.sloc_column);
    std::optional<std::size_t> label_col;
    if (spec.label_column) label_col = require(*spec.label_column);

    std::vector<std::size_t> metric_cols;
    if (!spec.metric_columns.empty()) {
        for (const auto& name : spec.metric_columns) metric_cols.push_back(require(name));
    } else {
        for (std::size_t c = 0; c < table.header.size(); ++c) {
            if (c == id_col || c == sloc_col || (label_col && c == *label_col)) continue;
            if (std::find(spec.ignore_columns.begin(), spec.ignore_columns.end(), table.header[c]) !=
                spec.ignore_columns.end())
                continue;
            const bool any_numeric = std::any_of(table.rows.begin(), table.rows.end(), [&](const auto& row) {
                return csv::parse_double(row[c]).has_value();
            });
            if (any_numeric || table.rows.empty()) metric_cols.push_back(c);
        }
    }

    std::vector<std::string> metric_names;
    for (auto c : metric_cols) metric_names.push_back(table.header[c]);

    std::vector<ModuleRecord> modules;
    modules.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::size_t row_no = r + 1;
        auto fail = [&](const std::string& what, std::size_t col) -> DataError {
            return DataError(path + ": " + what + at_row(row_no, table.header[col]));
        };
        ModuleRecord m;
        m.id = row[id_col];
        if (m.id.empty()) throw fail("missing id", id_col);
        auto sloc = csv::parse_integer(row[sloc_col]);
        if (!sloc) throw fail("non-numeric sloc", sloc_col);
        if (*sloc < 1) throw fail("non-positive sloc", sloc_col);
        m.sloc = *sloc;
        if (label_col) {
            m.label = parse_label(row[*label_col]);
            if (!m.label) throw fail("invalid label '" + row[*label_col] + "'", *label_col);
        }
        for (auto c : metric_cols) {
            auto value = csv::parse_double(row[c]);
            if (!value) throw fail("non-numeric metric cell '" + row[c] + "'", c);
            if (!std::isfinite(*value)) throw fail("non-finite metric", c);
            m.metrics.push_back(*value);
        }
        modules.push_back(std::move(m));
    }
    try {
        return make_release(std::move(project), std::move(version), std::move(metric_names),
                            std::move(modules));
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_release(const ReleaseDataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    std::vector<std::string> header{"id", "sloc"};
    if (dataset.labeled()) header.push_back("label");
    header.insert(header.end(), dataset.metric_names.begin(), dataset.metric_names.end());
    csv::write_row(out, header);
    for (const auto& m : dataset.modules) {
        std::vector<std::string> row{m.id, std::to_string(m.sloc)};
        if (m.label) row.push_back(*m.label ? "1" : "0");
        for (double v : m.metrics) row.push_back(csv::format_number(v));
        csv::write_row(out, row);
    }
}

std::vector<std::string> filter_failures(const ReleaseDataset& release, const CorpusFilter& filter) {
    if (!release.labeled()) throw DataError("cannot filter unlabeled release " + release.name());
    std::vector<std::string> reasons;
    const std::size_t k = release.k();
    const std::size_t n = release.n();
    if (k < filter.min_instances)
        reasons.push_back("instances " + std::to_string(k) + " < " + std::to_string(filter.min_instances));
    const double ratio = static_cast<double>(n) / static_cast<double>(k);
    if (ratio < filter.min_defect_ratio)
        reasons.push_back("defect ratio " + csv::format_number(ratio) + " < " +
                          csv::format_number(filter.min_defect_ratio));
    if (n < filter.min_defective)
        reasons.push_back("defective " + std::to_string(n) + " < " + std::to_string(filter.min_defective));
    return reasons;
}

std::vector<ReleaseDataset> filter_corpus(const std::vector<ReleaseDataset>& releases,
                                          const CorpusFilter& filter) {
    std::vector<ReleaseDataset> kept;
    for (const auto& r : releases)
        if (filter_failures(r, filter).empty()) kept.push_back(r);
    return kept;
}

StandardizedMetrics standardize_metrics(const ReleaseDataset& dataset) {
    const std::size_t k = dataset.k();
    if (k < 2) throw DataError("standardization needs at least 2 modules");
    StandardizedMetrics out;
    std::vector<std::pair<double, double>> moments;  // mean, std
    std::vector<std::size_t> kept_cols;
    for (std::size_t j = 0; j < dataset.metric_names.size(); ++j) {
        double lo = dataset.modules[0].metrics[j], hi = lo, sum = 0.0;
        for (const auto& m : dataset.modules) {
            lo = std::min(lo, m.metrics[j]);
            hi = std::max(hi, m.metrics[j]);
            sum += m.metrics[j];
        }
        const double mean = sum / static_cast<double>(k);
        double ss = 0.0;
        for (const auto& m : dataset.modules) ss += (m.metrics[j] - mean) * (m.metrics[j] - mean);
        const double sd = std::sqrt(ss / static_cast<double>(k));
        if (lo == hi || sd == 0.0) {
            out.dropped.push_back(dataset.metric_names[j]);
            continue;
        }
        out.kept.push_back(dataset.metric_names[j]);
        kept_cols.push_back(j);
        moments.emplace_back(mean, sd);
    }
    if (kept_cols.empty()) throw DataError("no usable metrics in " + dataset.name());
    out.rows.assign(k, std::vector<double>(kept_cols.size()));
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < kept_cols.size(); ++c)
            out.rows[i][c] = (dataset.modules[i].metrics[kept_cols[c]] - moments[c].first) / moments[c].second;
    return out;
}

}  // namespace dpeval

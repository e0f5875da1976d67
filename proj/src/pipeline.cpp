#include "dpeval/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "dpeval/csv.hpp"
#include "dpeval/errors.hpp"

namespace dpeval {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kMissing = "NA";

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t hash = 0xcbf29ce484222325ULL) {
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex(std::uint64_t value) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

std::string read_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
    if (path.empty() || fs::path(path).is_absolute()) return path;
    return (fs::path(base_dir) / path).lexically_normal().string();
}

// Looks up "section.key" either nested ({"fcm": {"tol": ...}}) or flat ({"fcm.tol": ...}).
const json* lookup(const json& root, const std::string& section, const std::string& key) {
    if (auto it = root.find(section); it != root.end() && it->is_object())
        if (auto inner = it->find(key); inner != it->end()) return &*inner;
    if (auto it = root.find(section + "." + key); it != root.end()) return &*it;
    return nullptr;
}

template <typename T>
void read_param(const json& root, const std::string& section, const std::string& key, T& target) {
    if (const json* value = lookup(root, section, key)) {
        try {
            target = value->get<T>();
        } catch (const json::exception&) {
            throw UsageError("config key " + section + "." + key + " has the wrong type");
        }
    }
}

ColumnSpec parse_columns(const json& j, ColumnSpec spec) {
    if (!j.is_object()) throw UsageError("column spec must be an object");
    if (j.contains("id_column")) spec.id_column = j.at("id_column").get<std::string>();
    if (j.contains("sloc_column")) spec.sloc_column = j.at("sloc_column").get<std::string>();
    if (j.contains("label_column")) {
        if (j.at("label_column").is_null()) spec.label_column.reset();
        else spec.label_column = j.at("label_column").get<std::string>();
    }
    if (j.contains("metric_columns")) {
        const auto& mc = j.at("metric_columns");
        if (mc.is_string()) {
            if (mc.get<std::string>() != "all-remaining")
                throw UsageError("metric_columns must be a list or \"all-remaining\"");
            spec.metric_columns.clear();
        } else {
            spec.metric_columns = mc.get<std::vector<std::string>>();
        }
    }
    if (j.contains("ignore_columns")) spec.ignore_columns = j.at("ignore_columns").get<std::vector<std::string>>();
    return spec;
}

json columns_json(const ColumnSpec& c) {
    json j{{"id_column", c.id_column}, {"sloc_column", c.sloc_column}};
    j["label_column"] = c.label_column ? json(*c.label_column) : json(nullptr);
    j["metric_columns"] = c.metric_columns.empty() ? json("all-remaining") : json(c.metric_columns);
    j["ignore_columns"] = c.ignore_columns;
    return j;
}

std::string kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::kOne: return "one";
        case ModelKind::kManualDown: return "manualdown";
        case ModelKind::kManualUp: return "manualup";
        case ModelKind::kCla: return "cla";
        case ModelKind::kFcm: return "fcm";
        case ModelKind::kSc: return "sc";
        case ModelKind::kExternal: return "external";
    }
    return "unknown";
}

std::string replace_all(std::string text, const std::string& from, const std::string& to) {
    for (std::size_t pos = 0; (pos = text.find(from, pos)) != std::string::npos; pos += to.size())
        text.replace(pos, from.size(), to);
    return text;
}

std::string cell(const IndicatorValue& v) { return v.value ? csv::format_number(*v.value) : kMissing; }

std::string budget_tag(const EffortBudget& b) { return to_string(b.kind) + "_" + csv::format_number(b.fraction); }

void write_provenance(std::ostream& out, const Provenance& p) {
    out << "# tool=" << p.tool << "\n# version=" << p.version << "\n# seed=" << p.seed
        << "\n# config_hash=" << p.config_hash << '\n';
}

json provenance_json(const Provenance& p) {
    return {{"tool", p.tool}, {"version", p.version}, {"seed", p.seed}, {"config_hash", p.config_hash}};
}

}  // namespace

ModelSpec parse_model_spec(const std::string& text) {
    static const std::map<std::string, ModelKind> builtin{
        {"one", ModelKind::kOne}, {"manualdown", ModelKind::kManualDown}, {"manualup", ModelKind::kManualUp},
        {"cla", ModelKind::kCla}, {"fcm", ModelKind::kFcm},               {"sc", ModelKind::kSc}};
    if (auto it = builtin.find(text); it != builtin.end()) return {text, it->second, {}};
    if (text.rfind("external:", 0) == 0 && text.size() > 9) return {text, ModelKind::kExternal, text.substr(9)};
    throw UsageError("unknown model '" + text + "'");
}

const std::vector<std::string>& known_indicators() {
    static const std::vector<std::string> names{
        "mcc",       "roi",    "roi_general", "eifa", "y",    "pci_ifa",          "pii_ifa",    "recall",
        "precision", "pf",     "f1",          "g1",   "ifa",  "recall_at_effort", "auc_loc_pd", "auc_pf_pd",
        "x",         "tp",     "fp",          "tn",   "fn",   "pii",              "pci"};
    return names;
}

RunConfig parse_config(const std::string& json_text, const std::string& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw UsageError(std::string("invalid config JSON: ") + e.what());
    }
    if (!root.is_object()) throw UsageError("config must be a JSON object");
    RunConfig config;
    try {
        ColumnSpec defaults;
        if (root.contains("columns")) defaults = parse_columns(root.at("columns"), defaults);
        for (const auto& entry : root.value("corpus", json::array())) {
            ReleaseEntry r;
            if (entry.is_string()) {
                r.path = entry.get<std::string>();
                r.columns = defaults;
            } else {
                r.path = entry.at("path").get<std::string>();
                r.columns = entry.contains("columns") ? parse_columns(entry.at("columns"), defaults) : defaults;
                r.project = entry.value("project", "");
                r.version = entry.value("version", "");
            }
            if (r.project.empty() && r.version.empty()) r.project = fs::path(r.path).stem().string();
            r.path = resolve(base_dir, r.path);
            config.corpus.push_back(std::move(r));
        }
        if (root.contains("models")) {
            config.models.clear();
            for (const auto& m : root.at("models")) {
                if (m.is_string()) {
                    config.models.push_back(parse_model_spec(m.get<std::string>()));
                } else {
                    const std::string kind = m.at("kind").get<std::string>();
                    ModelSpec spec = kind == "external" ? ModelSpec{"", ModelKind::kExternal, m.at("path").get<std::string>()}
                                                        : parse_model_spec(kind);
                    spec.name = m.value("name", kind == "external" ? "external:" + spec.path : kind);
                    config.models.push_back(std::move(spec));
                }
                if (config.models.back().kind == ModelKind::kExternal)
                    config.models.back().path = resolve(base_dir, config.models.back().path);
            }
        }
        if (root.contains("budgets")) {
            config.budgets.clear();
            for (const auto& b : root.at("budgets"))
                config.budgets.push_back({parse_budget_kind(b.at("kind").get<std::string>()), b.at("fraction").get<double>()});
        }
        if (root.contains("indicators")) config.indicators = root.at("indicators").get<std::vector<std::string>>();
        if (config.indicators.size() == 1 && config.indicators[0] == "all") {
            config.indicators.clear();
            for (const auto& name : known_indicators())
                if (name != "ifa" && name != "x" && name != "tp" && name != "fp" && name != "tn" && name != "fn" &&
                    name != "pii" && name != "pci")
                    config.indicators.push_back(name);
        }
        config.seed = root.value("seed", std::uint64_t{0});
        config.output_dir = resolve(base_dir, root.value("output_dir", std::string("out")));
        config.workers = root.value("workers", std::size_t{1});
        config.fcm.seed = config.seed;
        config.sc.seed = config.seed;
        read_param(root, "one", "excluded", config.one.excluded_code_size_percentage);
        read_param(root, "fcm", "fuzzifier", config.fcm.fuzzifier);
        read_param(root, "fcm", "tol", config.fcm.tol);
        read_param(root, "fcm", "max_iter", config.fcm.max_iter);
        read_param(root, "fcm", "seed", config.fcm.seed);
        read_param(root, "sc", "seed", config.sc.seed);
        read_param(root, "sc", "eig_tol", config.sc.eig_tol);
        read_param(root, "sc", "max_eig_iter", config.sc.max_eig_iter);
        read_param(root, "evaluation", "eifa_weight", config.evaluation.eifa_weight);
        read_param(root, "evaluation", "recall_effort_fraction", config.evaluation.recall_effort_fraction);
        if (const json* w = lookup(root, "evaluation", "roi_general_weight"); w && !w->is_null())
            config.evaluation.general_roi_weight = w->get<double>();
        read_param(root, "filter", "min_instances", config.filter.min_instances);
        read_param(root, "filter", "min_defect_ratio", config.filter.min_defect_ratio);
        read_param(root, "filter", "min_defective", config.filter.min_defective);
    } catch (const json::exception& e) {
        throw UsageError(std::string("invalid config: ") + e.what());
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), fs::path(path).parent_path().string().empty() ? "." : fs::path(path).parent_path().string());
}

void set_seed(RunConfig& config, std::uint64_t seed) {
    config.seed = seed;
    config.fcm.seed = seed;
    config.sc.seed = seed;
}

void validate_config(const RunConfig& config) {
    if (config.corpus.empty()) throw UsageError("config lists no releases");
    if (config.models.empty()) throw UsageError("config lists no models");
    if (config.budgets.empty()) throw UsageError("config lists no budgets");
    for (const auto& b : config.budgets) validate_budget(b);
    validate(config.one);
    const auto& known = known_indicators();
    for (const auto& name : config.indicators)
        if (std::find(known.begin(), known.end(), name) == known.end())
            throw UsageError("unknown indicator '" + name + "'");
    std::set<std::string> names;
    for (const auto& m : config.models)
        if (!names.insert(m.name).second) throw UsageError("duplicate model name '" + m.name + "'");
}

std::string config_hash(const RunConfig& config) {
    json j;
    j["corpus"] = json::array();
    for (const auto& r : config.corpus) {
        std::string content_hash;
        try {
            content_hash = hex(fnv1a(read_bytes(r.path)));
        } catch (const DataError&) {
            content_hash = "unreadable";
        }
        j["corpus"].push_back({{"project", r.project}, {"version", r.version}, {"columns", columns_json(r.columns)},
                               {"content", content_hash}});
    }
    j["models"] = json::array();
    for (const auto& m : config.models) j["models"].push_back({{"name", m.name}, {"kind", kind_name(m.kind)}});
    j["budgets"] = json::array();
    for (const auto& b : config.budgets) j["budgets"].push_back({{"kind", to_string(b.kind)}, {"fraction", b.fraction}});
    j["indicators"] = config.indicators;
    j["seed"] = config.seed;
    j["one"] = {{"excluded", config.one.excluded_code_size_percentage}};
    j["fcm"] = {{"fuzzifier", config.fcm.fuzzifier}, {"tol", config.fcm.tol}, {"max_iter", config.fcm.max_iter},
                {"seed", config.fcm.seed}};
    j["sc"] = {{"seed", config.sc.seed}, {"eig_tol", config.sc.eig_tol}, {"max_eig_iter", config.sc.max_eig_iter}};
    j["evaluation"] = {{"eifa_weight", config.evaluation.eifa_weight},
                       {"recall_effort_fraction", config.evaluation.recall_effort_fraction},
                       {"roi_general_weight", config.evaluation.general_roi_weight
                                                  ? json(*config.evaluation.general_roi_weight)
                                                  : json(nullptr)}};
    return hex(fnv1a(j.dump()));
}

Provenance provenance_of(const RunConfig& config) {
    return {kToolName, kToolVersion, config.seed, config_hash(config)};
}

ModelOutput run_model(const ModelSpec& spec, const ReleaseDataset& dataset, const ReleaseEntry& entry,
                      const RunConfig& config) {
    ModelOutput out;
    switch (spec.kind) {
        case ModelKind::kOne: out.ranking = one_ranking(dataset, config.one); break;
        case ModelKind::kManualDown: out = manual_down(dataset); break;
        case ModelKind::kManualUp: out = manual_up(dataset); break;
        case ModelKind::kCla: out = cla(dataset); break;
        case ModelKind::kFcm: out = fcm(dataset, config.fcm); break;
        case ModelKind::kSc: out = spectral_cluster(dataset, config.sc); break;
        case ModelKind::kExternal: {
            std::string path = spec.path;
            path = replace_all(path, "{project}", dataset.project);
            path = replace_all(path, "{version}", dataset.version);
            path = replace_all(path, "{release}", replace_all(dataset.name(), "/", "_"));
            path = replace_all(path, "{stem}", fs::path(entry.path).stem().string());
            out.ranking = import_external_ranking(path, dataset, spec.name);
            break;
        }
    }
    out.ranking.producer = spec.name;
    return out;
}

std::vector<ReleaseDataset> load_corpus(const RunConfig& config) {
    std::vector<ReleaseDataset> releases;
    std::set<std::string> names;
    for (const auto& entry : config.corpus) {
        releases.push_back(load_release(entry.path, entry.columns, entry.project, entry.version));
        if (!names.insert(releases.back().name()).second)
            throw DataError("duplicate release name '" + releases.back().name() + "'");
    }
    return releases;
}

EvaluationRun evaluate_corpus(const RunConfig& config, const std::vector<ReleaseDataset>& releases,
                              std::size_t workers) {
    validate_config(config);
    if (releases.size() != config.corpus.size()) throw UsageError("release list does not match the config corpus");
    const std::size_t tasks = releases.size() * config.models.size();
    std::vector<std::vector<ResultRow>> rows(tasks);
    std::vector<std::optional<RunFailure>> failures(tasks);
    std::atomic<std::size_t> next{0};

    auto work = [&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;) {
            const std::size_t r = t / config.models.size();
            const auto& spec = config.models[t % config.models.size()];
            const auto& dataset = releases[r];
            try {
                const ModelOutput output = run_model(spec, dataset, config.corpus[r], config);
                std::vector<ResultRow> produced;
                for (const auto& budget : config.budgets) {
                    ResultRow row;
                    row.model = spec.name;
                    row.release = dataset.name();
                    row.k = dataset.k();
                    row.n = dataset.n();
                    row.s = dataset.s();
                    row.report = evaluate(output, dataset, budget, config.evaluation);
                    produced.push_back(std::move(row));
                }
                rows[t] = std::move(produced);
            } catch (const ModelError& e) {
                failures[t] = RunFailure{spec.name, dataset.name(), e.what(), false};
            } catch (const std::exception& e) {
                failures[t] = RunFailure{spec.name, dataset.name(), e.what(), true};
            }
        }
    };
    const std::size_t count = std::max<std::size_t>(1, std::min(workers, tasks));
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < count; ++w) pool.emplace_back(work);
    work();
    pool.clear();

    EvaluationRun run;
    for (std::size_t t = 0; t < tasks; ++t) {
        for (auto& row : rows[t]) run.rows.push_back(std::move(row));
        if (failures[t]) run.failures.push_back(*failures[t]);
    }
    return run;
}

std::vector<std::string> result_columns(const std::vector<std::string>& indicators) {
    std::vector<std::string> cols{"model", "release", "budget_kind", "budget_fraction", "k",   "n",   "s",
                                  "x",     "tp",      "fp",          "tn",              "fn",  "pii", "pci",
                                  "degenerate"};
    for (const auto& name : indicators)
        if (std::find(cols.begin(), cols.end(), name) == cols.end()) cols.push_back(name);
    cols.push_back("notes");
    return cols;
}

void write_results_csv(std::ostream& out, const EvaluationRun& run, const RunConfig& config) {
    write_provenance(out, provenance_of(config));
    const auto cols = result_columns(config.indicators);
    csv::write_row(out, cols);
    for (const auto& row : run.rows) {
        const auto& rep = row.report;
        const auto& insp = rep.inspection;
        std::vector<std::string> fields{row.model,
                                        row.release,
                                        to_string(insp.budget.kind),
                                        csv::format_number(insp.budget.fraction),
                                        std::to_string(row.k),
                                        std::to_string(row.n),
                                        std::to_string(row.s)};
        std::string notes;
        for (std::size_t c = fields.size(); c + 1 < cols.size(); ++c) {
            if (cols[c] == "degenerate") {
                fields.push_back(insp.degenerate ? "1" : "0");
                continue;
            }
            const auto value = rep.get(cols[c]);
            fields.push_back(cell(value));
            if (!value.note.empty()) notes += (notes.empty() ? "" : ";") + cols[c] + "=" + value.note;
        }
        fields.push_back(notes);
        csv::write_row(out, fields);
    }
}

void write_results_json(std::ostream& out, const EvaluationRun& run, const RunConfig& config) {
    json doc;
    doc["provenance"] = provenance_json(provenance_of(config));
    doc["rows"] = json::array();
    const auto cols = result_columns(config.indicators);
    for (const auto& row : run.rows) {
        const auto& insp = row.report.inspection;
        json j{{"model", row.model},
               {"release", row.release},
               {"budget_kind", to_string(insp.budget.kind)},
               {"budget_fraction", insp.budget.fraction},
               {"k", row.k},
               {"n", row.n},
               {"s", row.s},
               {"degenerate", insp.degenerate}};
        json notes = json::object();
        for (const auto& name : cols) {
            if (j.contains(name) || name == "notes") continue;
            const auto v = row.report.get(name);
            const bool count = name == "x" || name == "tp" || name == "fp" || name == "tn" || name == "fn" ||
                               name == "y" || name == "ifa";
            if (!v.value) j[name] = nullptr;
            else if (count) j[name] = static_cast<std::int64_t>(*v.value);
            else j[name] = *v.value;
            if (!v.note.empty()) notes[name] = v.note;
        }
        j["notes"] = notes;
        doc["rows"].push_back(std::move(j));
    }
    doc["failures"] = json::array();
    for (const auto& f : run.failures)
        doc["failures"].push_back({{"model", f.model}, {"release", f.release}, {"error", f.message}});
    out << doc.dump(2) << '\n';
}

ResultTable read_results(const std::string& path) {
    const auto table = csv::read_file(path);
    ResultTable out;
    for (const auto& comment : table.comments) {
        const auto eq = comment.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = comment.substr(0, eq);
        const std::string value = comment.substr(eq + 1);
        if (key == "tool") out.provenance.tool = value;
        else if (key == "version") out.provenance.version = value;
        else if (key == "seed") out.provenance.seed = static_cast<std::uint64_t>(std::stoull(value));
        else if (key == "config_hash") out.provenance.config_hash = value;
    }
    out.columns = table.header;
    out.rows = table.rows;
    for (const char* required : {"model", "release", "budget_kind", "budget_fraction"})
        if (!table.column(required)) throw DataError(path + ": missing column '" + required + "'");
    return out;
}

std::vector<stats::PerformanceMatrix> performance_matrices(const std::vector<ResultTable>& tables,
                                                           const std::string& indicator, stats::Polarity polarity,
                                                           std::vector<EffortBudget>& budgets,
                                                           std::vector<std::vector<std::string>>& dropped) {
    struct Grid {
        std::vector<std::string> models, datasets;
        std::map<std::pair<std::string, std::string>, std::optional<double>> cells;
    };
    std::vector<std::pair<EffortBudget, Grid>> grids;
    for (const auto& table : tables) {
        auto col = [&](const std::string& name) {
            auto it = std::find(table.columns.begin(), table.columns.end(), name);
            if (it == table.columns.end()) throw DataError("results lack column '" + name + "'");
            return static_cast<std::size_t>(it - table.columns.begin());
        };
        const auto model_c = col("model"), release_c = col("release"), kind_c = col("budget_kind"),
                   frac_c = col("budget_fraction"), value_c = col(indicator);
        for (const auto& row : table.rows) {
            const auto fraction = csv::parse_double(row[frac_c]);
            if (!fraction) throw DataError("bad budget_fraction '" + row[frac_c] + "'");
            const EffortBudget budget{parse_budget_kind(row[kind_c]), *fraction};
            auto it = std::find_if(grids.begin(), grids.end(), [&](const auto& g) { return g.first == budget; });
            if (it == grids.end()) {
                grids.push_back({budget, {}});
                it = grids.end() - 1;
            }
            Grid& g = it->second;
            if (std::find(g.models.begin(), g.models.end(), row[model_c]) == g.models.end())
                g.models.push_back(row[model_c]);
            if (std::find(g.datasets.begin(), g.datasets.end(), row[release_c]) == g.datasets.end())
                g.datasets.push_back(row[release_c]);
            std::optional<double> value;
            if (row[value_c] != kMissing) {
                value = csv::parse_double(row[value_c]);
                if (!value) throw DataError("bad " + indicator + " value '" + row[value_c] + "'");
            }
            g.cells[{row[model_c], row[release_c]}] = value;
        }
    }
    std::vector<stats::PerformanceMatrix> out;
    budgets.clear();
    dropped.clear();
    for (const auto& [budget, g] : grids) {
        stats::PerformanceMatrix pm;
        pm.models = g.models;
        pm.polarity = polarity;
        std::vector<std::string> skipped;
        for (const auto& d : g.datasets) {
            std::vector<std::optional<double>> column;
            std::size_t defined = 0;
            for (const auto& m : g.models) {
                auto it = g.cells.find({m, d});
                column.push_back(it == g.cells.end() ? std::nullopt : it->second);
                defined += column.back().has_value();
            }
            if (defined < 2) {
                skipped.push_back(d);
                continue;
            }
            pm.datasets.push_back(d);
            if (pm.values.empty()) pm.values.resize(g.models.size());
            for (std::size_t m = 0; m < g.models.size(); ++m) pm.values[m].push_back(column[m]);
        }
        if (pm.values.empty()) pm.values.resize(g.models.size());
        budgets.push_back(budget);
        dropped.push_back(std::move(skipped));
        out.push_back(std::move(pm));
    }
    return out;
}

std::vector<Comparison> compare_results(const std::vector<ResultTable>& tables, const CompareOptions& options) {
    if (tables.empty()) throw UsageError("no results files given");
    if (!options.force)
        for (const auto& t : tables)
            if (t.provenance.config_hash != tables.front().provenance.config_hash)
                throw UsageError("results files carry different config hashes (" + tables.front().provenance.config_hash +
                                 " vs " + t.provenance.config_hash + "); pass --force to mix them");

    auto matrices_for = [&](const std::string& indicator, std::vector<EffortBudget>& budgets,
                            std::vector<std::vector<std::string>>& dropped) {
        const auto polarity =
            indicator == options.indicator && options.polarity ? *options.polarity : stats::default_polarity(indicator);
        return performance_matrices(tables, indicator, polarity, budgets, dropped);
    };
    std::vector<EffortBudget> budgets;
    std::vector<std::vector<std::string>> dropped;
    const auto matrices = matrices_for(options.indicator, budgets, dropped);
    std::vector<EffortBudget> other_budgets;
    std::vector<std::vector<std::string>> other_dropped;
    std::vector<stats::PerformanceMatrix> other_matrices;
    if (options.correlate_with) other_matrices = matrices_for(*options.correlate_with, other_budgets, other_dropped);

    std::vector<Comparison> out;
    for (std::size_t i = 0; i < matrices.size(); ++i) {
        if (options.budget_kind && budgets[i].kind != *options.budget_kind) continue;
        if (options.budget_fraction && budgets[i].fraction != *options.budget_fraction) continue;
        if (matrices[i].models.size() < 2 || matrices[i].datasets.size() < 2)
            throw DataError("budget " + budget_tag(budgets[i]) + ": need at least 2 models sharing 2 releases");
        Comparison c;
        c.budget = budgets[i];
        c.indicator = options.indicator;
        c.grouping = stats::scott_knott_esd(matrices[i]);
        c.dropped_datasets = dropped[i];
        if (options.correlate_with) {
            for (std::size_t j = 0; j < other_matrices.size(); ++j) {
                if (other_budgets[j] == budgets[i]) {
                    c.other = stats::scott_knott_esd(other_matrices[j]);
                    c.agreement = stats::grouping_agreement(c.grouping, *c.other);
                }
            }
        }
        out.push_back(std::move(c));
    }
    if (out.empty()) throw DataError("no results match the requested budget");
    return out;
}

std::vector<std::string> write_comparison(const Comparison& c, const Provenance& provenance, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const std::string tag = c.indicator + "_" + budget_tag(c.budget);
    const std::string sk_csv = (fs::path(out_dir) / ("sk_" + tag + ".csv")).string();
    const std::string sk_json = (fs::path(out_dir) / ("sk_" + tag + ".json")).string();
    const std::string delta_csv = (fs::path(out_dir) / ("delta_" + tag + ".csv")).string();
    {
        std::ofstream out(sk_csv, std::ios::binary);
        write_provenance(out, provenance);
        csv::write_row(out, {"model", "mean_rank", "group"});
        for (const auto& e : c.grouping.entries)
            csv::write_row(out, {e.model, csv::format_number(e.mean_rank), std::to_string(e.group)});
    }
    {
        json doc;
        doc["provenance"] = provenance_json(provenance);
        doc["indicator"] = c.indicator;
        doc["budget"] = {{"kind", to_string(c.budget.kind)}, {"fraction", c.budget.fraction}};
        doc["groups"] = json::array();
        for (const auto& e : c.grouping.entries)
            doc["groups"].push_back({{"model", e.model}, {"mean_rank", e.mean_rank}, {"group", e.group}});
        doc["datasets"] = c.grouping.ranks.datasets;
        doc["dropped_datasets"] = c.dropped_datasets;
        if (c.agreement) {
            auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
            doc["agreement"] = {{"spearman", opt(c.agreement->spearman)}, {"kendall", opt(c.agreement->kendall)}};
        }
        std::ofstream out(sk_json, std::ios::binary);
        out << doc.dump(2) << '\n';
    }
    {
        std::ofstream out(delta_csv, std::ios::binary);
        write_provenance(out, provenance);
        const auto delta = stats::pairwise_delta(c.grouping.ranks);
        std::vector<std::string> header{"model"};
        header.insert(header.end(), c.grouping.ranks.models.begin(), c.grouping.ranks.models.end());
        csv::write_row(out, header);
        for (std::size_t a = 0; a < delta.size(); ++a) {
            std::vector<std::string> row{c.grouping.ranks.models[a]};
            for (double d : delta[a]) row.push_back(csv::format_number(d));
            csv::write_row(out, row);
        }
    }
    return {sk_csv, sk_json, delta_csv};
}

std::vector<SweepRow> sweep(const RunConfig& config, const std::vector<ReleaseDataset>& releases, SweepAxis axis,
                            const std::vector<double>& grid, std::size_t workers, std::vector<RunFailure>* failures) {
    if (grid.empty()) throw UsageError("empty sweep grid");
    std::vector<SweepRow> out;
    for (double g : grid) {
        RunConfig point = config;
        if (axis == SweepAxis::kBudgetFraction) {
            if (!(g > 0.0 && g <= 1.0)) throw UsageError("budget grid value " + csv::format_number(g) + " outside (0, 1]");
            std::vector<BudgetKind> kinds;
            for (const auto& b : config.budgets)
                if (std::find(kinds.begin(), kinds.end(), b.kind) == kinds.end()) kinds.push_back(b.kind);
            point.budgets.clear();
            for (auto kind : kinds) point.budgets.push_back({kind, g});
        } else {
            if (!(g >= 0.0 && g < 1.0)) throw UsageError("excluded grid value " + csv::format_number(g) + " outside [0, 1)");
            point.one.excluded_code_size_percentage = g;
        }
        const auto run = evaluate_corpus(point, releases, workers);
        for (const auto& row : run.rows)
            for (const auto& name : config.indicators)
                out.push_back({g, row.model, row.release, row.report.inspection.budget, name, row.report.get(name)});
        if (failures) failures->insert(failures->end(), run.failures.begin(), run.failures.end());
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows, SweepAxis axis, const RunConfig& config) {
    write_provenance(out, provenance_of(config));
    csv::write_row(out, {"axis", "grid_value", "model", "release", "budget_kind", "budget_fraction", "indicator", "value",
                         "note"});
    const std::string axis_name = axis == SweepAxis::kBudgetFraction ? "budget" : "excluded";
    for (const auto& r : rows)
        csv::write_row(out, {axis_name, csv::format_number(r.grid_value), r.model, r.release, to_string(r.budget.kind),
                             csv::format_number(r.budget.fraction), r.indicator, cell(r.value), r.value.note});
}

std::vector<ValidationEntry> validate_corpus(const RunConfig& config) {
    std::vector<ValidationEntry> out;
    for (const auto& entry : config.corpus) {
        ValidationEntry v;
        v.path = entry.path;
        v.release = entry.version.empty() ? entry.project
                    : entry.project.empty() ? entry.version
                                            : entry.project + "/" + entry.version;
        try {
            const auto release = load_release(entry.path, entry.columns, entry.project, entry.version);
            v.loaded = true;
            v.k = release.k();
            if (!release.labeled()) {
                v.failures.push_back("unlabeled release");
            } else {
                v.n = release.n();
                v.failures = filter_failures(release, config.filter);
            }
        } catch (const DataError& e) {
            v.failures.push_back(e.what());
        }
        out.push_back(std::move(v));
    }
    return out;
}

void write_one_ranking(std::ostream& out, const Ranking& ranking, const ReleaseDataset& dataset) {
    csv::write_row(out, {"rank", "id", "sloc"});
    for (std::size_t p = 0; p < ranking.order.size(); ++p) {
        const auto& m = dataset.modules[ranking.order[p]];
        csv::write_row(out, {std::to_string(p + 1), m.id, std::to_string(m.sloc)});
    }
}

}  // namespace dpeval

// Command-line front end: evaluate, compare, sweep, validate, one-rank.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dpeval/csv.hpp"
#include "dpeval/errors.hpp"
#include "dpeval/pipeline.hpp"

namespace fs = std::filesystem;
using namespace dpeval;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kModel = 3 };

struct CommonOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> budget_kind;
    std::optional<double> budget;
    std::string models;
    std::vector<std::string> indicators;
    std::string out;
    std::size_t workers = 0;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) items.push_back(item);
    return items;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--config", o.config_path, "Run config (JSON)")->required();
    cmd->add_option("--seed", o.seed, "Seed for stochastic models");
    cmd->add_option("--budget-kind", o.budget_kind, "snm or ssc")->check(CLI::IsMember({"snm", "ssc"}));
    cmd->add_option("--budget", o.budget, "Budget fraction in (0, 1]");
    cmd->add_option("--models", o.models, "Comma-separated model list");
    cmd->add_option("--indicator", o.indicators, "Indicator columns to report (repeatable)");
    cmd->add_option("--out", o.out, "Output directory");
    cmd->add_option("--workers", o.workers, "Worker threads");
}

RunConfig resolve_config(const CommonOptions& o) {
    RunConfig config = load_config(o.config_path);
    if (o.seed) set_seed(config, *o.seed);
    if (!o.models.empty()) {
        config.models.clear();
        for (const auto& m : split_list(o.models)) config.models.push_back(parse_model_spec(m));
    }
    if (o.budget_kind || o.budget) {
        std::vector<EffortBudget> budgets;
        if (o.budget_kind) {
            budgets.push_back({parse_budget_kind(*o.budget_kind), o.budget.value_or(0.2)});
        } else {
            for (auto b : config.budgets) {
                b.fraction = *o.budget;
                if (std::find(budgets.begin(), budgets.end(), b) == budgets.end()) budgets.push_back(b);
            }
        }
        config.budgets = budgets;
    }
    if (!o.indicators.empty()) config.indicators = o.indicators;
    if (!o.out.empty()) config.output_dir = o.out;
    if (o.workers > 0) config.workers = o.workers;
    validate_config(config);
    return config;
}

int report_failures(const std::vector<RunFailure>& failures) {
    int code = kOk;
    for (const auto& f : failures) {
        std::cerr << "error: model '" << f.model << "' on release '" << f.release << "': " << f.message << '\n';
        code = std::max(code, f.data_error ? int(kData) : int(kModel));
    }
    return code;
}

int cmd_evaluate(const CommonOptions& o) {
    const RunConfig config = resolve_config(o);
    const auto releases = load_corpus(config);
    const auto run = evaluate_corpus(config, releases, config.workers);
    fs::create_directories(config.output_dir);
    const auto csv_path = fs::path(config.output_dir) / "results.csv";
    const auto json_path = fs::path(config.output_dir) / "results.json";
    {
        std::ofstream out(csv_path, std::ios::binary);
        write_results_csv(out, run, config);
    }
    {
        std::ofstream out(json_path, std::ios::binary);
        write_results_json(out, run, config);
    }
    std::cout << "wrote " << run.rows.size() << " rows to " << csv_path.string() << '\n';
    return report_failures(run.failures);
}

struct CompareCli {
    std::vector<std::string> files;
    std::string indicator = "mcc";
    std::string polarity;
    std::optional<std::string> budget_kind;
    std::optional<double> budget;
    std::string out = ".";
    bool force = false;
    std::string correlate;
};

int cmd_compare(const CompareCli& o) {
    std::vector<ResultTable> tables;
    for (const auto& f : o.files) tables.push_back(read_results(f));
    CompareOptions options;
    options.indicator = o.indicator;
    if (o.polarity == "higher") options.polarity = stats::Polarity::kHigherBetter;
    if (o.polarity == "lower") options.polarity = stats::Polarity::kLowerBetter;
    if (o.budget_kind) options.budget_kind = parse_budget_kind(*o.budget_kind);
    options.budget_fraction = o.budget;
    options.force = o.force;
    if (!o.correlate.empty()) options.correlate_with = o.correlate;
    const auto comparisons = compare_results(tables, options);
    for (const auto& c : comparisons) {
        for (const auto& d : c.dropped_datasets)
            std::cerr << "warning: release '" << d << "' has fewer than 2 defined values; skipped\n";
        const auto files = write_comparison(c, tables.front().provenance, o.out);
        std::cout << c.indicator << " " << to_string(c.budget.kind) << " " << csv::format_number(c.budget.fraction)
                  << ":";
        for (const auto& e : c.grouping.entries) std::cout << " " << e.model << "=" << e.group;
        if (c.agreement) {
            auto show = [](const std::optional<double>& v) { return v ? csv::format_number(*v) : std::string("NA"); };
            std::cout << " | spearman=" << show(c.agreement->spearman) << " kendall=" << show(c.agreement->kendall);
        }
        std::cout << '\n';
        for (const auto& f : files) std::cout << "  " << f << '\n';
    }
    return kOk;
}

int cmd_sweep(const CommonOptions& o, const std::string& axis_name, const std::string& grid_text) {
    const RunConfig config = resolve_config(o);
    const SweepAxis axis = axis_name == "budget" ? SweepAxis::kBudgetFraction : SweepAxis::kExcludedPercentage;
    std::vector<double> grid;
    for (const auto& item : split_list(grid_text)) {
        auto value = csv::parse_double(item);
        if (!value) throw UsageError("bad grid value '" + item + "'");
        grid.push_back(*value);
    }
    const auto releases = load_corpus(config);
    std::vector<RunFailure> failures;
    const auto rows = sweep(config, releases, axis, grid, config.workers, &failures);
    fs::create_directories(config.output_dir);
    const auto path = fs::path(config.output_dir) / "sweep.csv";
    std::ofstream out(path, std::ios::binary);
    write_sweep_csv(out, rows, axis, config);
    std::cout << "wrote " << rows.size() << " rows to " << path.string() << '\n';
    return report_failures(failures);
}

int cmd_validate(const std::string& config_path, bool strict) {
    const RunConfig config = load_config(config_path);
    const auto entries = validate_corpus(config);
    bool any_failed = false;
    for (const auto& e : entries) {
        if (e.failures.empty()) {
            std::cout << "PASS " << e.release << " (k=" << e.k << ", n=" << e.n << ")\n";
            continue;
        }
        any_failed = true;
        std::cout << "FAIL " << e.release;
        if (e.loaded) std::cout << " (k=" << e.k << ", n=" << e.n << ")";
        std::cout << ":";
        for (const auto& f : e.failures) std::cout << " " << f << ";";
        std::cout << '\n';
    }
    return strict && any_failed ? kData : kOk;
}

struct OneRankCli {
    std::string data;
    std::string config_path;
    double excluded = 0.2;
    std::string id_column = "id";
    std::string sloc_column = "sloc";
    std::string out;
};

int cmd_one_rank(const OneRankCli& o) {
    OneConfig one{o.excluded};
    validate(one);
    if (!o.data.empty()) {
        ColumnSpec spec;
        spec.id_column = o.id_column;
        spec.sloc_column = o.sloc_column;
        const auto dataset = load_release(o.data, spec);
        const auto ranking = one_ranking(dataset, one);
        if (o.out.empty()) {
            write_one_ranking(std::cout, ranking, dataset);
        } else {
            std::ofstream out(o.out, std::ios::binary);
            write_one_ranking(out, ranking, dataset);
        }
        return kOk;
    }
    if (o.config_path.empty()) throw UsageError("one-rank needs --data or --config");
    const RunConfig config = load_config(o.config_path);
    const auto releases = load_corpus(config);
    const std::string dir = o.out.empty() ? config.output_dir : o.out;
    fs::create_directories(dir);
    for (const auto& dataset : releases) {
        std::string stem = dataset.name();
        std::replace(stem.begin(), stem.end(), '/', '_');
        const auto path = fs::path(dir) / ("one_rank_" + stem + ".csv");
        std::ofstream out(path, std::ios::binary);
        write_one_ranking(out, one_ranking(dataset, one), dataset);
        std::cout << path.string() << '\n';
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Effort-aware defect prediction evaluation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    CommonOptions eval_opts;
    auto* evaluate = app.add_subcommand("evaluate", "Evaluate models on every release and budget");
    add_common(evaluate, eval_opts);

    CompareCli compare_opts;
    auto* compare = app.add_subcommand("compare", "Scott-Knott ESD grouping of results files");
    compare->add_option("results", compare_opts.files, "results.csv files")->required();
    compare->add_option("--indicator", compare_opts.indicator, "Indicator column to compare");
    compare->add_option("--polarity", compare_opts.polarity, "higher or lower (default by indicator)")
        ->check(CLI::IsMember({"higher", "lower"}));
    compare->add_option("--budget-kind", compare_opts.budget_kind)->check(CLI::IsMember({"snm", "ssc"}));
    compare->add_option("--budget", compare_opts.budget);
    compare->add_option("--out", compare_opts.out, "Output directory");
    compare->add_flag("--force", compare_opts.force, "Allow results with different config hashes");
    compare->add_option("--correlate", compare_opts.correlate, "Second indicator to correlate groupings with");

    CommonOptions sweep_opts;
    std::string axis = "budget", grid;
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate over a grid of budgets or excluded percentages");
    add_common(sweep_cmd, sweep_opts);
    sweep_cmd->add_option("--axis", axis, "budget or excluded")->check(CLI::IsMember({"budget", "excluded"}));
    sweep_cmd->add_option("--grid", grid, "Comma-separated grid values")->required();

    std::string validate_config_path;
    bool strict = false;
    auto* validate_cmd = app.add_subcommand("validate", "Check corpus files and release filters");
    validate_cmd->add_option("--config", validate_config_path)->required();
    validate_cmd->add_flag("--strict", strict, "Exit nonzero when any release fails");

    OneRankCli one_opts;
    auto* one_rank = app.add_subcommand("one-rank", "Print the size-based baseline ranking");
    one_rank->add_option("--data", one_opts.data, "Release CSV");
    one_rank->add_option("--config", one_opts.config_path, "Rank every release of a run config");
    one_rank->add_option("--excluded", one_opts.excluded, "Excluded code size percentage in [0, 1)");
    one_rank->add_option("--id-column", one_opts.id_column);
    one_rank->add_option("--sloc-column", one_opts.sloc_column);
    one_rank->add_option("--out", one_opts.out, "Output file (with --data) or directory (with --config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*evaluate) return cmd_evaluate(eval_opts);
        if (*compare) return cmd_compare(compare_opts);
        if (*sweep_cmd) return cmd_sweep(sweep_opts, axis, grid);
        if (*validate_cmd) return cmd_validate(validate_config_path, strict);
        if (*one_rank) return cmd_one_rank(one_opts);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << '\n';
        return kModel;
    }
    return kUsage;
}

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dpeval/csv.hpp"
#include "dpeval/errors.hpp"
#include "dpeval/pipeline.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "suites.hpp"

using namespace dpeval;
namespace fs = std::filesystem;

namespace {

const std::string kSynthetic = std::string(DPEVAL_DATA_DIR) + "/synthetic/config.json";

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args, const fixture::TempDir& dir) {
    const std::string out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = std::string(DPEVAL_CLI) + " " + args + " > " + out + " 2> " + err;
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, fixture::slurp(out), fixture::slurp(err)};
}

std::string results_csv(const EvaluationRun& run, const RunConfig& config) {
    std::ostringstream out;
    write_results_csv(out, run, config);
    return out.str();
}

// Small labeled release with two metrics, written as a CSV.
std::string write_small_release(const fixture::TempDir& dir, const std::string& name, std::uint64_t seed,
                                std::size_t k = 30) {
    std::mt19937_64 rng(seed);
    auto d = suite::clustered_release(rng, k, 2);
    const std::string path = dir / name;
    write_release(d, path);
    return path;
}

RunConfig small_config(const fixture::TempDir& dir, std::vector<std::string> models, std::size_t releases = 1) {
    std::ostringstream json;
    json << R"({"columns": {"label_column": "label"}, "corpus": [)";
    for (std::size_t i = 0; i < releases; ++i) {
        const std::string name = "rel" + std::to_string(i) + ".csv";
        write_small_release(dir, name, 100 + i);
        json << (i ? "," : "") << "\"" << name << "\"";
    }
    json << R"(], "models": [)";
    for (std::size_t i = 0; i < models.size(); ++i) json << (i ? "," : "") << "\"" << models[i] << "\"";
    json << R"(], "budgets": [{"kind": "snm", "fraction": 0.2}], "seed": 3})";
    return parse_config(json.str(), dir.path().string());
}

}  // namespace

TEST(Config, DefaultsAndKeys) {
    auto c = parse_config(R"({"corpus": ["a.csv"], "models": ["one"]})", "/base");
    ASSERT_EQ(c.corpus.size(), 1u);
    EXPECT_EQ(c.corpus[0].path, "/base/a.csv");
    EXPECT_EQ(c.corpus[0].project, "a");
    EXPECT_EQ(c.budgets.size(), 2u);
    EXPECT_EQ(c.budgets[0], (EffortBudget{BudgetKind::kSnm, 0.2}));
    EXPECT_EQ(c.budgets[1], (EffortBudget{BudgetKind::kSsc, 0.2}));
    EXPECT_EQ(c.indicators, (std::vector<std::string>{"mcc", "roi", "eifa"}));
    EXPECT_DOUBLE_EQ(c.one.excluded_code_size_percentage, 0.2);

    auto nested = parse_config(
        R"({"corpus": ["a.csv"], "models": ["fcm"], "seed": 9, "one": {"excluded": 0.1},
            "fcm": {"tol": 1e-8, "max_iter": 50}, "sc.eig_tol": 1e-10, "evaluation.roi_general_weight": 0.4})");
    EXPECT_DOUBLE_EQ(nested.one.excluded_code_size_percentage, 0.1);
    EXPECT_DOUBLE_EQ(nested.fcm.tol, 1e-8);
    EXPECT_EQ(nested.fcm.max_iter, 50u);
    EXPECT_EQ(nested.fcm.seed, 9u);
    EXPECT_EQ(nested.sc.seed, 9u);
    EXPECT_DOUBLE_EQ(nested.sc.eig_tol, 1e-10);
    EXPECT_EQ(nested.evaluation.general_roi_weight, 0.4);

    auto all = parse_config(R"({"corpus": ["a.csv"], "models": ["one"], "indicators": ["all"]})");
    EXPECT_GT(all.indicators.size(), 10u);
    EXPECT_NO_THROW(validate_config(all));
}

TEST(Config, Errors) {
    EXPECT_THROW(parse_config("{not json"), UsageError);
    EXPECT_THROW(parse_config(R"({"corpus": ["a.csv"], "models": ["bayes"]})"), UsageError);
    auto c = parse_config(R"({"corpus": ["a.csv"], "models": ["one"], "indicators": ["popt"]})");
    EXPECT_THROW(validate_config(c), UsageError);
    c = parse_config(R"({"corpus": ["a.csv"], "models": ["one"], "budgets": [{"kind": "snm", "fraction": 1.5}]})");
    EXPECT_THROW(validate_config(c), UsageError);
    c = parse_config(R"({"corpus": [], "models": ["one"]})");
    EXPECT_THROW(validate_config(c), UsageError);
    c = parse_config(R"({"corpus": ["a.csv"], "models": []})");
    EXPECT_THROW(validate_config(c), UsageError);
    EXPECT_THROW(load_config("/nonexistent/config.json"), UsageError);
}

TEST(Config, ModelSpecs) {
    EXPECT_EQ(parse_model_spec("manualdown").kind, ModelKind::kManualDown);
    EXPECT_EQ(parse_model_spec("sc").kind, ModelKind::kSc);
    auto ext = parse_model_spec("external:scores/{project}_{version}.csv");
    EXPECT_EQ(ext.kind, ModelKind::kExternal);
    EXPECT_EQ(ext.path, "scores/{project}_{version}.csv");
    EXPECT_THROW(parse_model_spec("external:"), UsageError);
    EXPECT_THROW(parse_model_spec(""), UsageError);
    EXPECT_THROW(parse_model_spec("SC"), UsageError);
}

TEST(Config, HashTracksInputsOnly) {
    fixture::TempDir dir;
    auto a = small_config(dir, {"one"});
    auto b = a;
    b.output_dir = "elsewhere";
    b.workers = 4;
    EXPECT_EQ(config_hash(a), config_hash(b));
    b.seed = 99;
    EXPECT_NE(config_hash(a), config_hash(b));
    b = a;
    b.budgets[0].fraction = 0.3;
    EXPECT_NE(config_hash(a), config_hash(b));
    const auto before = config_hash(a);
    std::ofstream(a.corpus[0].path, std::ios::app) << "extra,5,0,1,1\n";
    EXPECT_NE(config_hash(a), before);
    EXPECT_EQ(config_hash(a).size(), 16u);
}

TEST(Evaluate, RowCardinality) {
    fixture::TempDir dir;
    auto config = small_config(dir, {"one", "manualdown"});
    auto releases = load_corpus(config);
    auto run = evaluate_corpus(config, releases, 1);
    EXPECT_EQ(run.rows.size(), 2u);
    EXPECT_TRUE(run.failures.empty());
    EXPECT_EQ(run.rows[0].model, "one");
    EXPECT_EQ(run.rows[1].model, "manualdown");

    config = load_config(kSynthetic);
    releases = load_corpus(config);
    run = evaluate_corpus(config, releases, 2);
    EXPECT_EQ(run.rows.size(), config.models.size() * releases.size() * config.budgets.size());
}

TEST(Evaluate, DeterministicAcrossRunsAndWorkers) {
    const auto config = load_config(kSynthetic);
    const auto releases = load_corpus(config);
    const auto first = results_csv(evaluate_corpus(config, releases, 1), config);
    EXPECT_EQ(first, results_csv(evaluate_corpus(config, releases, 1), config));
    for (std::size_t w : {2u, 3u, 8u}) EXPECT_EQ(first, results_csv(evaluate_corpus(config, releases, w), config));
    EXPECT_NE(first.find("# config_hash=" + config_hash(config)), std::string::npos);
}

TEST(Evaluate, RowsEqualManualComposition) {
    fixture::TempDir dir;
    auto config = small_config(dir, {"fcm", "sc", "one", "cla"}, 2);
    config.budgets = {{BudgetKind::kSnm, 0.2}, {BudgetKind::kSsc, 0.3}};
    const auto releases = load_corpus(config);
    const auto run = evaluate_corpus(config, releases, 2);
    ASSERT_EQ(run.rows.size(), 16u);
    std::size_t i = 0;
    for (const auto& d : releases)
        for (const auto& m : config.models) {
            ModelOutput out;
            if (m.kind == ModelKind::kFcm) out = fcm(d, config.fcm);
            if (m.kind == ModelKind::kSc) out = spectral_cluster(d, config.sc);
            if (m.kind == ModelKind::kOne) out = {one_ranking(d, config.one), std::nullopt, {}};
            if (m.kind == ModelKind::kCla) out = cla(d);
            for (const auto& b : config.budgets) {
                const auto& row = run.rows[i++];
                const auto want = evaluate(out, d, b, config.evaluation);
                EXPECT_EQ(row.model, m.name);
                EXPECT_EQ(row.release, d.name());
                for (const auto& name : known_indicators()) EXPECT_EQ(row.report.get(name), want.get(name)) << name;
            }
        }
    EXPECT_EQ(config.fcm.seed, 3u);
}

TEST(Evaluate, FailuresAreReportedAndOtherRowsKept) {
    fixture::TempDir dir;
    auto config = small_config(dir, {"one", "fcm"}, 2);
    // A second file whose metrics are constant: fcm cannot cluster it.
    const auto flat = dir.file("flat.csv", "id,sloc,label,m1\na,10,1,5\nb,20,0,5\nc,30,0,5\n");
    config.corpus.push_back({flat, config.corpus[0].columns, "flat", ""});
    const auto releases = load_corpus(config);
    const auto run = evaluate_corpus(config, releases, 2);
    ASSERT_EQ(run.failures.size(), 1u);
    EXPECT_EQ(run.failures[0].model, "fcm");
    EXPECT_EQ(run.failures[0].release, "flat");
    EXPECT_FALSE(run.failures[0].data_error);
    EXPECT_EQ(run.rows.size(), 2u * 3u - run.failures.size());
    std::ostringstream json;
    write_results_json(json, run, config);
    EXPECT_NE(json.str().find("\"failures\""), std::string::npos);
    EXPECT_NE(json.str().find("flat"), std::string::npos);
}

TEST(Evaluate, ExternalScoresFromTemplate) {
    fixture::TempDir dir;
    auto config = small_config(dir, {"one"});
    const auto releases = load_corpus(config);
    const auto& d = releases[0];
    std::ostringstream scores;
    scores << "id,score\n";
    for (const auto& m : d.modules) scores << m.id << "," << static_cast<double>(m.sloc) << "\n";
    dir.file("scores/" + d.project + ".csv", scores.str());
    config.models = {parse_model_spec("external:" + (dir / "scores/{project}.csv"))};
    config.models[0].name = "sizes";
    auto run = evaluate_corpus(config, releases, 1);
    ASSERT_EQ(run.rows.size(), 1u);
    const auto want = evaluate(manual_down(d), d, config.budgets[0]);
    EXPECT_EQ(run.rows[0].report.get("mcc"), want.get("mcc"));
    EXPECT_EQ(run.rows[0].model, "sizes");

    config.models = {parse_model_spec("external:" + (dir / "missing/{stem}.csv"))};
    run = evaluate_corpus(config, releases, 1);
    ASSERT_EQ(run.failures.size(), 1u);
    EXPECT_TRUE(run.failures[0].data_error);
}

TEST(Results, CsvFormatAndReadBack) {
    fixture::TempDir dir;
    auto config = small_config(dir, {"one"});
    config.indicators = {"mcc", "roi", "eifa", "precision"};
    config.budgets = {{BudgetKind::kSnm, 0.01}};  // empty prefix: roi and precision undefined
    const auto releases = load_corpus(config);
    const auto run = evaluate_corpus(config, releases, 1);
    const std::string path = dir / "results.csv";
    {
        std::ofstream out(path);
        write_results_csv(out, run, config);
    }
    const auto table = read_results(path);
    EXPECT_EQ(table.provenance.tool, "dpeval");
    EXPECT_EQ(table.provenance.seed, 3u);
    EXPECT_EQ(table.provenance.config_hash, config_hash(config));
    EXPECT_EQ(table.columns, result_columns(config.indicators));
    ASSERT_EQ(table.rows.size(), 1u);
    auto cell = [&](const std::string& name) {
        auto it = std::find(table.columns.begin(), table.columns.end(), name);
        return table.rows[0][static_cast<std::size_t>(it - table.columns.begin())];
    };
    EXPECT_EQ(cell("x"), "0");
    EXPECT_EQ(cell("degenerate"), "1");
    EXPECT_EQ(cell("roi"), "NA");
    EXPECT_EQ(cell("precision"), "NA");
    EXPECT_EQ(cell("mcc"), "0");
    EXPECT_NE(cell("notes").find("roi=empty prefix"), std::string::npos) << cell("notes");
    EXPECT_NE(cell("notes").find("mcc=zero-marginal"), std::string::npos) << cell("notes");
}

namespace {

// Writes a results.csv holding one indicator column for a grid of models x releases.
std::string write_table(const fixture::TempDir& dir, const std::string& name, const std::string& hash,
                        const std::vector<std::string>& models, const std::vector<std::vector<std::string>>& values) {
    std::ostringstream out;
    out << "# tool=dpeval\n# version=0.1.0\n# seed=0\n# config_hash=" << hash << "\n";
    out << "model,release,budget_kind,budget_fraction,mcc\n";
    for (std::size_t m = 0; m < models.size(); ++m)
        for (std::size_t r = 0; r < values[m].size(); ++r)
            out << models[m] << ",rel" << r << ",snm,0.2," << values[m][r] << "\n";
    return dir.file(name, out.str());
}

std::vector<std::vector<std::string>> as_cells(const dpeval::stats::PerformanceMatrix& pm) {
    std::vector<std::vector<std::string>> out;
    for (const auto& row : pm.values) {
        out.emplace_back();
        for (const auto& v : row) out.back().push_back(v ? csv::format_number(*v) : "NA");
    }
    return out;
}

}  // namespace

TEST(Compare, MirrorsTheGroupingFixtures) {
    fixture::TempDir dir;
    for (const auto& f : suite::sk_fixtures()) {
        const auto path = write_table(dir, f.name + ".csv", "h1", f.matrix.models, as_cells(f.matrix));
        const auto comparisons = compare_results({read_results(path)}, {});
        ASSERT_EQ(comparisons.size(), 1u);
        for (const auto& [model, group] : f.expected)
            EXPECT_EQ(comparisons[0].grouping.at(model).group, group) << f.name << " " << model;
        const auto files = write_comparison(comparisons[0], read_results(path).provenance, dir / ("cmp_" + f.name));
        ASSERT_EQ(files.size(), 3u);
        // The delta matrix matches pair enumeration over the rank samples.
        const auto delta = csv::read_file(files[2]);
        const auto& ranks = comparisons[0].grouping.ranks;
        for (std::size_t a = 0; a < ranks.models.size(); ++a)
            for (std::size_t b = 0; b < ranks.models.size(); ++b)
                EXPECT_NEAR(*csv::parse_double(delta.rows[a][b + 1]),
                            oracle::cliffs_delta(ranks.ranks[a], ranks.ranks[b]), 1e-15);
        EXPECT_EQ(delta.comments.back(), "config_hash=h1");
    }
}

TEST(Compare, RefusesMixedHashesUnlessForced) {
    fixture::TempDir dir;
    const auto fx = suite::sk_fixtures()[0];
    auto cells = as_cells(fx.matrix);
    const auto a = write_table(dir, "a.csv", "h1", {"A"}, {cells[0]});
    const auto b = write_table(dir, "b.csv", "h2", {"B"}, {cells[1]});
    const std::vector<ResultTable> tables{read_results(a), read_results(b)};
    EXPECT_THROW(compare_results(tables, {}), UsageError);
    CompareOptions force;
    force.force = true;
    const auto c = compare_results(tables, force);
    EXPECT_EQ(c[0].grouping.at("A").group, 1);
    EXPECT_EQ(c[0].grouping.at("B").group, 2);
}

TEST(Compare, DropsReleasesWithoutTwoDefinedValues) {
    fixture::TempDir dir;
    const auto path = write_table(dir, "r.csv", "h", {"A", "B"}, {{"0.9", "0.8", "0.7"}, {"0.1", "NA", "0.2"}});
    const auto c = compare_results({read_results(path)}, {});
    EXPECT_EQ(c[0].dropped_datasets, std::vector<std::string>{"rel1"});
    EXPECT_EQ(c[0].grouping.ranks.datasets.size(), 2u);
    CompareOptions lower;
    lower.polarity = stats::Polarity::kLowerBetter;
    EXPECT_EQ(compare_results({read_results(path)}, lower)[0].grouping.at("B").group, 1);
}

TEST(Sweep, SinglePointEqualsEvaluate) {
    const auto config = load_config(kSynthetic);
    const auto releases = load_corpus(config);
    const auto run = evaluate_corpus(config, releases, 1);
    const auto rows = sweep(config, releases, SweepAxis::kBudgetFraction, {0.2}, 1);
    ASSERT_EQ(rows.size(), run.rows.size() * config.indicators.size());
    std::size_t i = 0;
    for (const auto& r : run.rows)
        for (const auto& name : config.indicators) {
            EXPECT_EQ(rows[i].model, r.model);
            EXPECT_EQ(rows[i].release, r.release);
            EXPECT_EQ(rows[i].value, r.report.get(name));
            ++i;
        }
}

TEST(Sweep, ExcludedZeroMatchesManualDown) {
    auto config = load_config(kSynthetic);
    config.models = {parse_model_spec("one"), parse_model_spec("manualdown")};
    config.indicators = known_indicators();
    const auto releases = load_corpus(config);
    const auto rows = sweep(config, releases, SweepAxis::kExcludedPercentage, {0.0, 0.2}, 2);
    std::size_t compared = 0;
    for (const auto& r : rows) {
        if (r.grid_value != 0.0 || r.model != "one") continue;
        auto twin = std::find_if(rows.begin(), rows.end(), [&](const SweepRow& s) {
            return s.grid_value == 0.0 && s.model == "manualdown" && s.release == r.release && s.budget == r.budget &&
                   s.indicator == r.indicator;
        });
        ASSERT_NE(twin, rows.end());
        EXPECT_EQ(r.value, twin->value) << r.release << " " << r.indicator;
        ++compared;
    }
    EXPECT_GT(compared, 0u);
}

TEST(Sweep, TruePositivesGrowAlongTheBudgetGrid) {
    auto config = load_config(kSynthetic);
    config.indicators = {"tp", "x"};
    const auto releases = load_corpus(config);
    const std::vector<double> grid{0.05, 0.1, 0.2, 0.3, 0.5, 0.8, 1.0};
    const auto rows = sweep(config, releases, SweepAxis::kBudgetFraction, grid, 2);
    std::map<std::tuple<std::string, std::string, BudgetKind, std::string>, double> last;
    for (const auto& r : rows) {
        const auto key = std::make_tuple(r.model, r.release, r.budget.kind, r.indicator);
        if (auto it = last.find(key); it != last.end()) EXPECT_GE(*r.value.value, it->second);
        last[key] = *r.value.value;
    }
    EXPECT_THROW(sweep(config, releases, SweepAxis::kBudgetFraction, {0.0}, 1), UsageError);
    EXPECT_THROW(sweep(config, releases, SweepAxis::kExcludedPercentage, {1.0}, 1), UsageError);
}

TEST(Validate, FilterReasons) {
    fixture::TempDir dir;
    auto row_block = [](std::size_t k, std::size_t n) {
        std::ostringstream out;
        out << "id,sloc,bug,m\n";
        for (std::size_t i = 0; i < k; ++i) out << "f" << i << "," << 10 + i << "," << (i < n ? 2 : 0) << "," << i << "\n";
        return out.str();
    };
    dir.file("small.csv", row_block(99, 20));
    dir.file("few.csv", row_block(100, 5));
    dir.file("ok.csv", row_block(200, 10));
    dir.file("broken.csv", "id,sloc,bug\na,0,1\n");
    const auto config_path = dir.file(
        "c.json", R"({"columns": {"label_column": "bug"}, "corpus": ["small.csv", "few.csv", "ok.csv", "broken.csv",
                       "absent.csv"], "models": ["one"]})");
    const auto entries = validate_corpus(load_config(config_path));
    ASSERT_EQ(entries.size(), 5u);
    EXPECT_FALSE(entries[0].failures.empty());
    EXPECT_FALSE(entries[1].failures.empty());
    EXPECT_TRUE(entries[2].failures.empty());
    EXPECT_FALSE(entries[3].loaded);
    EXPECT_NE(entries[3].failures[0].find("non-positive sloc at row 1"), std::string::npos);
    EXPECT_FALSE(entries[4].loaded);

    auto strict = run_cli("validate --strict --config " + config_path, dir);
    EXPECT_EQ(strict.code, 2);
    EXPECT_NE(strict.out.find("PASS ok"), std::string::npos);
    EXPECT_NE(strict.out.find("FAIL small"), std::string::npos);
    EXPECT_EQ(run_cli("validate --config " + config_path, dir).code, 0);
    EXPECT_EQ(run_cli("validate --strict --config " + kSynthetic, dir).code, 0);
}

TEST(Cli, EvaluateWritesByteIdenticalResults) {
    fixture::TempDir dir;
    const auto a = run_cli("evaluate --config " + kSynthetic + " --out " + (dir / "a"), dir);
    ASSERT_EQ(a.code, 0) << a.err;
    const auto b = run_cli("evaluate --config " + kSynthetic + " --workers 3 --out " + (dir / "b"), dir);
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(fixture::slurp(dir / "a/results.csv"), fixture::slurp(dir / "b/results.csv"));
    EXPECT_EQ(fixture::slurp(dir / "a/results.json"), fixture::slurp(dir / "b/results.json"));
    EXPECT_TRUE(fs::exists(dir / "a/results.json"));

    const auto seeded = run_cli("evaluate --config " + kSynthetic + " --seed 11 --models one,fcm --budget-kind ssc "
                                "--budget 0.3 --indicator mcc --indicator g1 --out " + (dir / "c"), dir);
    ASSERT_EQ(seeded.code, 0) << seeded.err;
    const auto table = read_results(dir / "c/results.csv");
    EXPECT_EQ(table.provenance.seed, 11u);
    EXPECT_EQ(table.rows.size(), 2u * 5u);
    EXPECT_EQ(table.columns, result_columns({"mcc", "g1"}));
    EXPECT_EQ(table.rows[0][2], "ssc");
    EXPECT_EQ(table.rows[0][3], "0.3");

    const auto cmp = run_cli("compare " + (dir / "a/results.csv") + " --indicator eifa --budget-kind snm --out " +
                                 (dir / "cmp"),
                             dir);
    ASSERT_EQ(cmp.code, 0) << cmp.err;
    EXPECT_TRUE(fs::exists(dir / "cmp/sk_eifa_snm_0.2.csv"));
    EXPECT_TRUE(fs::exists(dir / "cmp/delta_eifa_snm_0.2.csv"));
    EXPECT_FALSE(fs::exists(dir / "cmp/sk_eifa_ssc_0.2.csv"));
    const auto mixed = run_cli("compare " + (dir / "a/results.csv") + " " + (dir / "c/results.csv") + " --out " +
                                   (dir / "cmp2"),
                               dir);
    EXPECT_EQ(mixed.code, 1);
    EXPECT_NE(mixed.err.find("--force"), std::string::npos);
}

TEST(Cli, SweepAndOneRank) {
    fixture::TempDir dir;
    const auto s = run_cli("sweep --config " + kSynthetic + " --axis excluded --grid 0,0.2 --models one --out " +
                               (dir / "s"),
                           dir);
    ASSERT_EQ(s.code, 0) << s.err;
    const auto table = csv::read_file(dir / "s/sweep.csv");
    EXPECT_EQ(table.header, (std::vector<std::string>{"axis", "grid_value", "model", "release", "budget_kind",
                                                      "budget_fraction", "indicator", "value", "note"}));
    EXPECT_EQ(table.rows.size(), 2u * 5u * 2u * 8u);

    const auto data = dir.file("r.csv", "name,loc\na,9\nb,8\nc,7\nd,6\ne,5\nf,5\ng,10\n");
    const auto r = run_cli("one-rank --data " + data + " --id-column name --sloc-column loc --excluded 0.2", dir);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "rank,id,sloc\n1,a,9\n2,b,8\n3,c,7\n4,d,6\n5,e,5\n6,f,5\n7,g,10\n");
    const auto all = run_cli("one-rank --config " + kSynthetic + " --out " + (dir / "ranks"), dir);
    ASSERT_EQ(all.code, 0) << all.err;
    EXPECT_TRUE(fs::exists(dir / "ranks/one_rank_alpha_1.0.csv"));
}

TEST(Cli, ExitCodes) {
    fixture::TempDir dir;
    EXPECT_EQ(run_cli("", dir).code, 1);
    EXPECT_EQ(run_cli("evaluate", dir).code, 1);
    EXPECT_EQ(run_cli("evaluate --config " + kSynthetic + " --budget 1.5 --out " + (dir / "x"), dir).code, 1);
    EXPECT_EQ(run_cli("evaluate --config " + kSynthetic + " --models bayes --out " + (dir / "x"), dir).code, 1);
    EXPECT_EQ(run_cli("one-rank --data r.csv --excluded 1", dir).code, 1);

    const auto missing = dir.file("missing.json", R"({"corpus": ["nope.csv"], "models": ["one"]})");
    const auto m = run_cli("evaluate --config " + missing + " --out " + (dir / "x"), dir);
    EXPECT_EQ(m.code, 2);
    EXPECT_NE(m.err.find("nope.csv"), std::string::npos);

    dir.file("flat.csv", "id,sloc,bug,m1\na,10,1,5\nb,20,0,5\nc,30,0,5\n");
    const auto flat = dir.file("flat.json",
                               R"({"columns": {"label_column": "bug"}, "corpus": ["flat.csv"], "models": ["one", "fcm"]})");
    const auto f = run_cli("evaluate --config " + flat + " --out " + (dir / "y"), dir);
    EXPECT_EQ(f.code, 3);
    EXPECT_NE(f.err.find("model 'fcm' on release 'flat'"), std::string::npos) << f.err;
    // The rows that did succeed are still written.
    EXPECT_EQ(read_results(dir / "y/results.csv").rows.size(), 2u);
    EXPECT_EQ(run_cli("--version", dir).code, 0);
}

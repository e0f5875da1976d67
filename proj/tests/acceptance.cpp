// Acceptance gate: one PASS/FAIL/SKIP line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>

#include "dpeval/errors.hpp"
#include "dpeval/pipeline.hpp"
#include "suites.hpp"

using namespace dpeval;

namespace {

enum class Verdict { kPass, kFail, kSkip };

struct Result {
    Verdict verdict;
    std::string detail;
};

Result from(const suite::Outcome& o) {
    std::ostringstream d;
    d << o.checks << " checks, " << o.violations << " violations";
    if (o.violations) d << "; first: " << o.first;
    return {o.violations == 0 && o.checks > 0 ? Verdict::kPass : Verdict::kFail, d.str()};
}

suite::Outcome merge(std::initializer_list<suite::Outcome> parts) {
    suite::Outcome all;
    for (const auto& p : parts) {
        all.checks += p.checks;
        if (p.violations && all.violations == 0) all.first = p.first;
        all.violations += p.violations;
    }
    return all;
}

Result timed(double limit_seconds, const std::function<Result()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Result r = body();
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[64];
    std::snprintf(buf, sizeof buf, "; %.2fs (limit %.0fs)", elapsed, limit_seconds);
    r.detail += buf;
    if (elapsed >= limit_seconds && r.verdict == Verdict::kPass) r.verdict = Verdict::kFail;
    return r;
}

suite::Outcome magnitude_boundaries() {
    using stats::Magnitude;
    suite::Outcome o;
    const std::pair<double, Magnitude> cases[] = {
        {0.0, Magnitude::kNegligible},
        {std::nextafter(0.147, 0.0), Magnitude::kNegligible},
        {0.147, Magnitude::kSmall},
        {-0.147, Magnitude::kSmall},
        {std::nextafter(0.33, 0.0), Magnitude::kSmall},
        {0.33, Magnitude::kMedium},
        {-0.33, Magnitude::kMedium},
        {std::nextafter(0.474, 0.0), Magnitude::kMedium},
        {0.474, Magnitude::kLarge},
        {-0.474, Magnitude::kLarge},
        {1.0, Magnitude::kLarge},
    };
    for (const auto& [delta, want] : cases)
        o.expect(stats::magnitude_of(delta) == want, "magnitude at " + std::to_string(delta));
    return o;
}

std::string evaluate_csv(const RunConfig& config, const std::vector<ReleaseDataset>& releases, std::size_t workers) {
    std::ostringstream out;
    write_results_csv(out, evaluate_corpus(config, releases, workers), config);
    return out.str();
}

Result pipeline_determinism() {
    const auto config = load_config(std::string(DPEVAL_DATA_DIR) + "/synthetic/config.json");
    const auto releases = load_corpus(config);
    if (releases.size() != 5) return {Verdict::kFail, "expected 5 bundled releases"};
    const auto a = evaluate_csv(config, releases, 1);
    const auto b = evaluate_csv(config, releases, 1);
    const auto c = evaluate_csv(config, releases, 4);
    const bool same = a == b && a == c;
    std::ostringstream d;
    d << releases.size() << " releases, " << std::count(a.begin(), a.end(), '\n') << " lines, workers {1,1,4} "
      << (same ? "identical" : "differ");
    return {same ? Verdict::kPass : Verdict::kFail, d.str()};
}

std::optional<double> median_of(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

Result corpus_medians() {
    const char* path = std::getenv("DPEVAL_CORPUS_CONFIG");
    if (!path || !*path) return {Verdict::kSkip, "set DPEVAL_CORPUS_CONFIG to a run config over the public corpora"};
    auto config = load_config(path);
    config.models = {parse_model_spec("one"), parse_model_spec("manualdown"), parse_model_spec("manualup")};
    config.budgets = {{BudgetKind::kSnm, 0.2}};
    config.indicators = {"mcc", "roi", "eifa"};
    const auto releases = filter_corpus(load_corpus(config), config.filter);
    const auto run = evaluate_corpus(config, releases, 0);
    auto median = [&](const std::string& model, const std::string& indicator) {
        std::vector<double> values;
        for (const auto& r : run.rows)
            if (r.model == model)
                if (auto v = r.report.get(indicator); v.defined()) values.push_back(*v.value);
        return median_of(values);
    };
    struct Target {
        const char* model;
        const char* indicator;
        double want, tol;
    };
    const Target targets[] = {{"one", "eifa", 0.0, 0.0},
                              {"one", "mcc", 0.219, 0.02},
                              {"one", "roi", 33.4, 2.0},
                              {"manualdown", "mcc", 0.268, 0.02},
                              {"manualup", "mcc", -0.150, 0.02}};
    bool ok = run.failures.empty();
    std::ostringstream d;
    d << releases.size() << " releases";
    for (const auto& t : targets) {
        const auto m = median(t.model, t.indicator);
        const bool hit = m && std::fabs(*m - t.want) <= t.tol;
        ok = ok && hit;
        d << "; " << t.model << " " << t.indicator << "=" << (m ? std::to_string(*m) : "NA") << (hit ? "" : " (off)");
    }
    if (!run.failures.empty()) d << "; " << run.failures.size() << " failures";
    return {ok ? Verdict::kPass : Verdict::kFail, d.str()};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
        {"1 indicator oracle equivalence",
         [] { return timed(60, [] { return from(suite::indicator_oracles(1, 1000, 1e-12)); }); }},
        {"2 SNM monotonicity", [] { return from(suite::snm_monotonicity(2, 10000)); }},
        {"3 effort alignment", [] { return from(suite::effort_alignment(1, 1000)); }},
        {"4 ONE structure", [] { return from(suite::one_structure(4, 10000)); }},
        {"5 statistics suite",
         [] {
             return from(merge({suite::correlation_oracles(5, 6, 1000), magnitude_boundaries(),
                                suite::scott_knott_suite(5, 1000)}));
         }},
        {"6 model determinism", [] { return from(suite::model_determinism(6, 100, 10)); }},
        {"7 pipeline determinism", [] { return timed(30, pipeline_determinism); }},
        {"8 corpus medians", corpus_medians},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        Result r;
        try {
            r = run();
        } catch (const std::exception& e) {
            r = {Verdict::kFail, std::string("exception: ") + e.what()};
        }
        const char* tag = r.verdict == Verdict::kPass ? "PASS" : r.verdict == Verdict::kFail ? "FAIL" : "SKIP";
        failed += r.verdict == Verdict::kFail;
        std::cout << tag << "  " << name << "  (" << r.detail << ")" << std::endl;
    }
    return failed ? 1 : 0;
}

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "dpeval/dataset.hpp"
#include "dpeval/ranking.hpp"

namespace fixture {

struct Module {
    std::string id;
    std::int64_t sloc;
    int label = -1;  // -1 unlabeled
    std::vector<double> metrics = {};
};

inline dpeval::ReleaseDataset release(const std::vector<Module>& mods, std::vector<std::string> metric_names = {},
                                      std::string project = "p", std::string version = "1") {
    std::vector<dpeval::ModuleRecord> records;
    std::size_t width = 0;
    for (const auto& m : mods) width = std::max(width, m.metrics.size());
    if (metric_names.empty())
        for (std::size_t j = 0; j < width; ++j) metric_names.push_back("m" + std::to_string(j + 1));
    for (const auto& m : mods) {
        dpeval::ModuleRecord r;
        r.id = m.id;
        r.sloc = m.sloc;
        if (m.label >= 0) r.label = m.label == 1;
        r.metrics = m.metrics;
        records.push_back(r);
    }
    return dpeval::make_release(std::move(project), std::move(version), std::move(metric_names), std::move(records));
}

// Release whose module order is also the ranking order, with a ranking that
// follows it (scores k..1).
inline std::pair<dpeval::ReleaseDataset, dpeval::Ranking> ordered(const std::vector<std::int64_t>& slocs,
                                                                  const std::vector<int>& labels) {
    std::vector<Module> mods;
    for (std::size_t i = 0; i < slocs.size(); ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "m%02zu", i);
        mods.push_back({id, slocs[i], labels.empty() ? -1 : labels[i]});
    }
    auto d = release(mods);
    std::vector<double> scores;
    for (std::size_t i = 0; i < slocs.size(); ++i) scores.push_back(static_cast<double>(slocs.size() - i));
    auto r = dpeval::rank_by_score(d, scores, "fixed");
    return {d, r};
}

class TempDir {
public:
    TempDir() {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("dpeval_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path path() const { return path_; }
    std::string file(const std::string& name, const std::string& content) const {
        const auto p = path_ / name;
        std::filesystem::create_directories(p.parent_path());
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }
    std::string operator/(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace fixture

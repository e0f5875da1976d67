#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "dpeval/errors.hpp"
#include "dpeval/ref_models.hpp"
#include "random.hpp"

namespace dpeval {

namespace {

constexpr std::size_t kClusters = 2;

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double sum = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) sum += (a[c] - b[c]) * (a[c] - b[c]);
    return sum;
}

using Memberships = std::vector<std::array<double, kClusters>>;
using Centers = std::array<std::vector<double>, kClusters>;

Centers update_centers(const std::vector<std::vector<double>>& points, const Memberships& u, double m) {
    const std::size_t dims = points.front().size();
    Centers centers;
    for (std::size_t j = 0; j < kClusters; ++j) {
        centers[j].assign(dims, 0.0);
        double weight = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const double w = std::pow(u[i][j], m);
            weight += w;
            for (std::size_t c = 0; c < dims; ++c) centers[j][c] += w * points[i][c];
        }
        for (auto& v : centers[j]) v /= weight;
    }
    return centers;
}

// Minimizes the objective for fixed centers; a point sitting on a center
// belongs to it fully.
std::array<double, kClusters> membership(const std::array<double, kClusters>& dist, double m) {
    std::array<double, kClusters> u{};
    const auto zeros = static_cast<std::size_t>(std::count(dist.begin(), dist.end(), 0.0));
    if (zeros > 0) {
        for (std::size_t j = 0; j < kClusters; ++j) u[j] = dist[j] == 0.0 ? 1.0 / static_cast<double>(zeros) : 0.0;
        return u;
    }
    const double exponent = 1.0 / (m - 1.0);
    for (std::size_t j = 0; j < kClusters; ++j) {
        double denom = 0.0;
        for (std::size_t l = 0; l < kClusters; ++l) denom += std::pow(dist[j] / dist[l], exponent);
        u[j] = 1.0 / denom;
    }
    return u;
}

}  // namespace

ModelOutput fcm(const ReleaseDataset& dataset, const FcmParams& params) {
    if (!(params.fuzzifier > 1.0)) throw UsageError("fcm fuzzifier must exceed 1");
    if (!(params.tol > 0.0)) throw UsageError("fcm tol must be positive");
    if (params.max_iter == 0) throw UsageError("fcm max_iter must be positive");
    const std::size_t k = dataset.k();
    if (k < 2) throw ModelError("fcm needs at least 2 modules in " + dataset.name());

    // Canonical (id) order makes the arithmetic independent of row order.
    std::vector<std::size_t> canon(k);
    std::iota(canon.begin(), canon.end(), std::size_t{0});
    std::sort(canon.begin(), canon.end(),
              [&](std::size_t a, std::size_t b) { return dataset.modules[a].id < dataset.modules[b].id; });
    ReleaseDataset canonical = dataset;
    for (std::size_t c = 0; c < k; ++c) canonical.modules[c] = dataset.modules[canon[c]];

    StandardizedMetrics z;
    try {
        z = standardize_metrics(canonical);
    } catch (const DataError&) {
        throw ModelError("degenerate clustering: no usable metrics in " + dataset.name());
    }
    const std::vector<std::vector<double>>& points = z.rows;

    const double m = params.fuzzifier;
    detail::UnitRandom rng(params.seed);
    Memberships u(k);
    for (auto& row : u) {
        const double first = rng();
        row = {first, 1.0 - first};
    }

    ModelOutput out;
    auto& diag = out.diagnostics;
    diag.dropped_metrics = z.dropped;
    Centers centers;
    for (std::size_t iter = 1; iter <= params.max_iter; ++iter) {
        centers = update_centers(points, u, m);
        Memberships next(k);
        double objective = 0.0;
        double change = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            std::array<double, kClusters> dist{};
            for (std::size_t j = 0; j < kClusters; ++j) dist[j] = squared_distance(points[i], centers[j]);
            next[i] = membership(dist, m);
            for (std::size_t j = 0; j < kClusters; ++j) {
                objective += std::pow(next[i][j], m) * dist[j];
                change = std::max(change, std::fabs(next[i][j] - u[i][j]));
            }
        }
        u = std::move(next);
        diag.objective_history.push_back(objective);
        diag.iterations = iter;
        if (change < params.tol) break;
    }

    double scale = 0.0;
    for (const auto& c : centers) scale = std::max(scale, std::inner_product(c.begin(), c.end(), c.begin(), 0.0));
    const bool coincident = squared_distance(centers[0], centers[1]) <= 1e-12 * (1.0 + scale);
    const bool flat = std::all_of(u.begin(), u.end(), [](const auto& row) { return std::fabs(row[0] - 0.5) < 1e-9; });
    if (coincident || flat) throw ModelError("degenerate clustering in " + dataset.name());

    std::array<std::size_t, kClusters> sizes{};
    for (const auto& row : u) ++sizes[row[1] > row[0] ? 1 : 0];
    std::size_t defective;
    if (sizes[0] != sizes[1]) {
        defective = sizes[0] < sizes[1] ? 0 : 1;
    } else {
        const double sum0 = std::accumulate(centers[0].begin(), centers[0].end(), 0.0);
        const double sum1 = std::accumulate(centers[1].begin(), centers[1].end(), 0.0);
        defective = sum1 > sum0 ? 1 : 0;
    }
    diag.cluster_sizes = {sizes[defective], sizes[1 - defective]};

    std::vector<double> defective_membership(k);
    diag.memberships.resize(k);
    out.intrinsic_labels = std::vector<bool>(k);
    for (std::size_t c = 0; c < k; ++c) {
        const auto i = canon[c];
        defective_membership[i] = u[c][defective];
        diag.memberships[i] = {u[c][defective], u[c][1 - defective]};
        const bool in_defective = defective == 1 ? u[c][1] > u[c][0] : u[c][0] >= u[c][1];
        (*out.intrinsic_labels)[i] = in_defective;
    }
    diag.module_values = defective_membership;
    out.ranking = rank_by_score(dataset, defective_membership, "fcm");
    return out;
}

}  // namespace dpeval

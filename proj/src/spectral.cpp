#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dpeval/errors.hpp"
#include "dpeval/ref_models.hpp"
#include "random.hpp"

namespace dpeval {

namespace {

// Krylov dimension per Lanczos restart.
constexpr std::size_t kKrylovDim = 64;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void axpy(double alpha, const std::vector<double>& x, std::vector<double>& y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::vector<double>& v, double factor) {
    for (auto& e : v) e *= factor;
}

struct Graph {
    std::size_t k = 0;
    std::vector<double> adjacency;  // D^-1/2 W D^-1/2, row-major
    std::vector<double> trivial;    // unit kernel vector of L, proportional to sqrt(degree)

    std::vector<double> apply_adjacency(const std::vector<double>& v) const {
        std::vector<double> out(k, 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            const double* row = adjacency.data() + i * k;
            double sum = 0.0;
            for (std::size_t j = 0; j < k; ++j) sum += row[j] * v[j];
            out[i] = sum;
        }
        return out;
    }
    // 2I - L = I + A: the Fiedler vector is its top eigenvector off `trivial`.
    std::vector<double> apply_shifted(const std::vector<double>& v) const {
        auto out = apply_adjacency(v);
        axpy(1.0, v, out);
        return out;
    }
    std::vector<double> apply_laplacian(const std::vector<double>& v) const {
        auto out = apply_adjacency(v);
        for (std::size_t i = 0; i < k; ++i) out[i] = v[i] - out[i];
        return out;
    }
    void deflate(std::vector<double>& v) const { axpy(-dot(trivial, v), trivial, v); }
};

Graph build_graph(const std::vector<std::vector<double>>& rows) {
    Graph g;
    g.k = rows.size();
    const std::size_t k = g.k;
    std::vector<double> norms(k);
    for (std::size_t i = 0; i < k; ++i) norms[i] = std::sqrt(dot(rows[i], rows[i]));
    std::vector<double> w(k * k, 0.0);
    std::vector<double> degree(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            if (norms[i] == 0.0 || norms[j] == 0.0) continue;
            const double sim = std::max(0.0, dot(rows[i], rows[j]) / (norms[i] * norms[j]));
            w[i * k + j] = w[j * k + i] = sim;
            degree[i] += sim;
            degree[j] += sim;
        }
    }
    std::vector<double> inv_sqrt(k, 0.0);
    g.trivial.assign(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        if (degree[i] > 0.0) inv_sqrt[i] = 1.0 / std::sqrt(degree[i]);
        g.trivial[i] = std::sqrt(degree[i]);
    }
    const double norm = std::sqrt(dot(g.trivial, g.trivial));
    if (norm > 0.0) scale(g.trivial, 1.0 / norm);
    g.adjacency.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) g.adjacency[i * k + j] = inv_sqrt[i] * w[i * k + j] * inv_sqrt[j];
    return g;
}

struct Eigenpair {
    double value = 0.0;
    std::vector<double> vector;
    double residual = 0.0;
    std::size_t applications = 0;
};

// Restarted Lanczos with full reorthogonalization on the complement of the
// trivial eigenvector.
Eigenpair fiedler_pair(const Graph& g, const SpectralParams& params) {
    const std::size_t k = g.k;
    detail::UnitRandom rng(params.seed);
    std::vector<double> v(k);
    for (auto& e : v) e = rng() - 0.5;
    g.deflate(v);

    Eigenpair best;
    while (true) {
        double nv = std::sqrt(dot(v, v));
        if (nv == 0.0) throw ModelError("spectral eigensolver start vector vanished");
        scale(v, 1.0 / nv);

        const std::size_t budget = params.max_eig_iter - best.applications;
        const std::size_t dim = std::min({kKrylovDim, k - 1, budget});
        std::vector<std::vector<double>> basis{v};
        std::vector<double> alpha, beta;
        for (std::size_t j = 0; j < dim; ++j) {
            auto w = g.apply_shifted(basis[j]);
            ++best.applications;
            alpha.push_back(dot(basis[j], w));
            for (int pass = 0; pass < 2; ++pass) {
                for (const auto& q : basis) axpy(-dot(q, w), q, w);
                g.deflate(w);
            }
            const double b = std::sqrt(dot(w, w));
            if (j + 1 == dim || b < 1e-13) break;
            beta.push_back(b);
            scale(w, 1.0 / b);
            basis.push_back(std::move(w));
        }

        const auto m = static_cast<Eigen::Index>(alpha.size());
        Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
        Eigen::VectorXd sub = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                                    : Eigen::VectorXd(0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small;
        small.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        if (small.info() != Eigen::Success) throw ModelError("spectral eigensolver failed on the Krylov projection");
        const Eigen::VectorXd y = small.eigenvectors().col(m - 1);

        std::vector<double> ritz(k, 0.0);
        for (Eigen::Index i = 0; i < m; ++i) axpy(y(i), basis[static_cast<std::size_t>(i)], ritz);
        g.deflate(ritz);
        scale(ritz, 1.0 / std::sqrt(dot(ritz, ritz)));

        const auto lv = g.apply_laplacian(ritz);
        const double lambda = dot(ritz, lv);
        double res = 0.0;
        for (std::size_t i = 0; i < k; ++i) res += (lv[i] - lambda * ritz[i]) * (lv[i] - lambda * ritz[i]);
        best.value = lambda;
        best.vector = ritz;
        best.residual = std::sqrt(res);
        if (best.residual <= params.eig_tol) return best;
        if (best.applications >= params.max_eig_iter)
            throw ModelError("spectral eigensolver did not converge after " + std::to_string(best.applications) +
                             " iterations (residual " + std::to_string(best.residual) + ")");
        v = std::move(ritz);
    }
}

}  // namespace

std::vector<double> spectral_laplacian(const std::vector<std::vector<double>>& rows) {
    const Graph g = build_graph(rows);
    std::vector<double> lap(g.k * g.k);
    for (std::size_t i = 0; i < g.k; ++i)
        for (std::size_t j = 0; j < g.k; ++j) lap[i * g.k + j] = (i == j ? 1.0 : 0.0) - g.adjacency[i * g.k + j];
    return lap;
}

ModelOutput spectral_cluster(const ReleaseDataset& dataset, const SpectralParams& params) {
    if (!(params.eig_tol > 0.0)) throw UsageError("sc eig_tol must be positive");
    if (params.max_eig_iter == 0) throw UsageError("sc max_eig_iter must be positive");
    const std::size_t k = dataset.k();
    if (k < 2) throw ModelError("spectral clustering needs at least 2 modules in " + dataset.name());
    StandardizedMetrics z;
    try {
        z = standardize_metrics(dataset);
    } catch (const DataError& e) {
        throw ModelError(std::string("spectral clustering: ") + e.what());
    }

    const Graph g = build_graph(z.rows);
    if (std::all_of(g.adjacency.begin(), g.adjacency.end(), [](double a) { return a == 0.0; }))
        throw ModelError("zero similarity graph in " + dataset.name());

    const Eigenpair pair = fiedler_pair(g, params);
    const auto& v = pair.vector;

    double threshold = 0.0;
    auto upper = [&](std::size_t i) { return v[i] > threshold; };
    std::size_t upper_count = 0;
    for (std::size_t i = 0; i < k; ++i) upper_count += upper(i);
    if (upper_count == 0 || upper_count == k) {
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        threshold = k % 2 ? sorted[k / 2] : (sorted[k / 2 - 1] + sorted[k / 2]) / 2.0;
        upper_count = 0;
        for (std::size_t i = 0; i < k; ++i) upper_count += upper(i);
        if (upper_count == 0 || upper_count == k)
            throw ModelError("spectral clustering produced a one-sided partition in " + dataset.name());
    }

    double upper_sum = 0.0, lower_sum = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double row_sum = std::accumulate(z.rows[i].begin(), z.rows[i].end(), 0.0);
        (upper(i) ? upper_sum : lower_sum) += row_sum;
    }
    const double upper_mean = upper_sum / static_cast<double>(upper_count);
    const double lower_mean = lower_sum / static_cast<double>(k - upper_count);
    const bool upper_defective = upper_mean >= lower_mean;

    ModelOutput out;
    out.intrinsic_labels = std::vector<bool>(k);
    std::vector<double> scores(k);
    for (std::size_t i = 0; i < k; ++i) {
        (*out.intrinsic_labels)[i] = upper(i) == upper_defective;
        scores[i] = upper_defective ? v[i] - threshold : threshold - v[i];
    }
    const std::size_t defective_count = upper_defective ? upper_count : k - upper_count;
    out.diagnostics.iterations = pair.applications;
    out.diagnostics.dropped_metrics = z.dropped;
    out.diagnostics.cluster_sizes = {defective_count, k - defective_count};
    out.diagnostics.module_values = v;
    out.diagnostics.eigenvalue = pair.value;
    out.diagnostics.residual = pair.residual;
    out.ranking = rank_by_score(dataset, scores, "sc");
    return out;
}

}  // namespace dpeval

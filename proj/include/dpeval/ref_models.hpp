#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpeval/dataset.hpp"
#include "dpeval/ranking.hpp"

namespace dpeval {

struct ModelDiagnostics {
    std::size_t iterations = 0;
    std::vector<std::string> dropped_metrics;
    std::vector<std::size_t> cluster_sizes;
    /// Fuzzy objective after each full update (fcm only).
    std::vector<double> objective_history;
    /// Per module (dataset order): membership to the defective cluster (fcm)
    /// or Fiedler vector component (sc).
    std::vector<double> module_values;
    /// fcm only: per module (dataset order), memberships {defective, clean}.
    std::vector<std::array<double, 2>> memberships;
    double eigenvalue = 0.0;  ///< sc only
    double residual = 0.0;    ///< sc only, ||L v - lambda v||

    bool operator==(const ModelDiagnostics&) const = default;
};

struct ModelOutput {
    Ranking ranking;
    /// The model's own defective/clean call per module (dataset order), if it makes one.
    std::optional<std::vector<bool>> intrinsic_labels;
    ModelDiagnostics diagnostics;

    bool operator==(const ModelOutput&) const = default;
};

/// score = SLOC, ties by ascending id.
ModelOutput manual_down(const ReleaseDataset& dataset);

/// score = 1/SLOC, ties by ascending id (not reversed).
ModelOutput manual_up(const ReleaseDataset& dataset);

/// Per-module count of metrics strictly above the release median.
std::vector<std::size_t> cla_counts(const ReleaseDataset& dataset);

/// Cluster-and-label: modules with equal counts form a cluster and the top
/// ceil(m/2) of the m distinct counts are labeled defective. Ranked by count
/// descending, then SLOC descending, then id.
ModelOutput cla(const ReleaseDataset& dataset);

struct FcmParams {
    double fuzzifier = 2.0;
    double tol = 1e-6;  ///< on the largest membership change between iterations
    std::size_t max_iter = 300;
    std::uint64_t seed = 0;
};

/// Two-cluster fuzzy c-means on z-scored metrics. The larger cluster is
/// clean; on equal sizes the cluster whose centroid has the larger
/// coordinate sum is defective. Ranked by membership to the defective
/// cluster. Modules are processed in id order, so the result does not depend
/// on the input row order. Throws ModelError on degenerate clustering.
ModelOutput fcm(const ReleaseDataset& dataset, const FcmParams& params = {});

struct SpectralParams {
    std::uint64_t seed = 0;
    double eig_tol = 1e-9;
    std::size_t max_eig_iter = 10000;  ///< operator applications
};

/// Spectral bipartition on the clamped-cosine similarity graph of z-scored
/// metrics, split by the sign of the Fiedler vector of the symmetric
/// normalized Laplacian (median split when one side is empty). The side with
/// the larger mean metric row sum is defective. Throws ModelError on an
/// empty similarity graph or eigensolver non-convergence.
ModelOutput spectral_cluster(const ReleaseDataset& dataset, const SpectralParams& params = {});

/// Dense symmetric normalized Laplacian I - D^-1/2 W D^-1/2 used by
/// spectral_cluster, row-major k*k. Isolated nodes get a unit diagonal.
std::vector<double> spectral_laplacian(const std::vector<std::vector<double>>& rows);

}  // namespace dpeval

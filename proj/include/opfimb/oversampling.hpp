#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "opfimb/clustering.hpp"
#include "opfimb/dataset.hpp"
#include "opfimb/distance.hpp"
#include "opfimb/random.hpp"

namespace opfimb {

enum class OverVariant {
    /// Gaussian around the cluster mean
    O2PF,
    /// radius interpolation towards the geometric median
    RI,
    /// Gaussian draw pulled towards its nearest cluster member
    MI,
    /// Gaussian around the cluster prototype
    P,
    /// density-weighted mean, then MI interpolation
    WI,
};

std::string_view to_string(OverVariant v);

struct OverPolicy {
    OverVariant variant = OverVariant::O2PF;
    std::size_t k_max = 5;
};

/// Generator fitted to one minority cluster. Matrices are row-major D x D.
struct ClusterModel {
    /// Row indices into the minority subset.
    std::vector<Index> members;
    std::vector<double> center;
    /// Sample covariance (n - 1 denominator), before regularization.
    std::vector<double> covariance;
    /// Lower Cholesky factor of covariance + regularization * I.
    std::vector<double> cholesky;
    double regularization = 0.0;
    std::size_t allocation = 0;
};

/// floor(size_i / total * n_s) per cluster, then the remainder one at a time
/// to clusters in descending size (smaller index first on ties).
std::vector<std::size_t> allocate(std::span<const std::size_t> sizes, std::size_t n_s);

/// Row-major D x D sample covariance of the rows; zero matrix for a single row.
std::vector<double> sample_covariance(const Dataset& points, std::span<const Index> rows);

struct Factor {
    std::vector<double> lower;
    double regularization = 0.0;
};

/// Cholesky factor of `cov`. When the plain factorization fails, adds eps*I
/// with eps = max(1e-6 * trace / D, 1e-9), growing eps tenfold until it succeeds.
Factor regularized_cholesky(std::span<const double> cov, std::size_t dim, bool force = false);

/// Weiszfeld iteration from `start` (or the mean when empty); stops when a
/// step moves less than `tol` or after `max_iter` steps.
std::vector<double> geometric_median(std::span<const std::vector<double>> points,
                                     std::span<const double> start = {}, double tol = 1e-8,
                                     std::size_t max_iter = 1000);

struct OverResult {
    /// Input rows unchanged, followed by the synthetic rows.
    Dataset data;
    std::size_t k_star = 0;
    std::vector<ClusterModel> clusters;
    /// emitted[i] = synthetics produced by cluster i; equals clusters[i].allocation.
    std::vector<std::size_t> emitted;
};

/// Clusters the minority class with best_k (k_max clamped to minority size - 1),
/// fits one generator per cluster and appends n_s synthetic minority rows with
/// fresh ids. Cluster i draws from rng.spawn(i).
OverResult oversample(const Dataset& train, std::size_t n_s, const OverPolicy& policy,
                      RandomSource& rng, const DistanceFn& d = {});

}  // namespace opfimb

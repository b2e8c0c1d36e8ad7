#pragma once

#include <span>
#include <vector>

#include "opfimb/dataset.hpp"
#include "opfimb/distance.hpp"
#include "opfimb/supervised.hpp"

namespace opfimb {

/// Directed k-nearest-neighbour graph with Parzen-style node densities.
struct KnnGraph {
    std::size_t k = 0;
    /// neighbors[q] = the k nearest nodes of q by (distance, index).
    std::vector<std::vector<Index>> neighbors;
    /// weights[q][i] = d(q, neighbors[q][i]).
    std::vector<std::vector<double>> weights;
    /// Largest arc weight in the graph (m_w).
    double max_weight = 0.0;
    std::vector<double> density;

    std::size_t size() const { return neighbors.size(); }
};

/// Output of OPF clustering. Clusters are numbered 0..c-1 in the order their
/// prototypes (density maxima) leave the queue.
struct ClusterForest {
    std::vector<Index> predecessor;
    std::vector<double> cost;
    std::vector<int> cluster_label;
    std::vector<Index> prototypes;
    std::vector<std::vector<Index>> members;
    double delta = 0.0;

    std::size_t cluster_count() const { return prototypes.size(); }
};

/// Builds the k-NN graph and evaluates
///   rho(q) = 1 / (sqrt(2 pi psi^2) k) * sum_{u in A_k(q)} exp(-d(q,u)^2 / (2 psi^2)),
/// psi = max_weight / 3. When every arc has weight 0 all densities are 1.
KnnGraph build_knn_graph(const Dataset& data, std::size_t k, const DistanceFn& d = {});

/// Maximum f_min conquest over the graph's arcs. A node leaving the queue
/// without a predecessor becomes a prototype of a new cluster.
ClusterForest cluster(const KnnGraph& graph);

/// sum over clusters of W'_i / (W_i + W'_i), with arc affinity 1/d
/// (capped at 1e12 for zero-length arcs); W_i sums arcs leaving a member of
/// cluster i towards the same cluster, W'_i towards any other cluster.
double normalized_cut(const KnnGraph& graph, const ClusterForest& forest);

struct BestK {
    std::size_t k = 0;
    double cut = 0.0;
    KnnGraph graph;
    ClusterForest forest;
    /// cuts[k - 1] is the normalized cut obtained with k neighbours.
    std::vector<double> cuts;
};

/// Tries k = 1..k_max and keeps the smallest k reaching the minimum normalized cut.
BestK best_k(const Dataset& data, std::size_t k_max, const DistanceFn& d = {});

}  // namespace opfimb

#include "opfimb/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <set>
#include <tuple>

namespace opfimb {

namespace {

constexpr double kZeroArcAffinity = 1e12;

struct NeighborTable {
    std::vector<std::vector<Index>> ids;
    std::vector<std::vector<double>> dists;
};

NeighborTable nearest(const Dataset& data, std::size_t k, const DistanceFn& d) {
    const std::size_t n = data.size();
    PairwiseDistances dist(data, d);
    NeighborTable t;
    t.ids.resize(n);
    t.dists.resize(n);
    std::vector<std::pair<double, Index>> cand;
    cand.reserve(n);
    for (Index q = 0; q < n; ++q) {
        cand.clear();
        for (Index u = 0; u < n; ++u)
            if (u != q) cand.emplace_back(dist(q, u), u);
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
        for (std::size_t i = 0; i < k; ++i) {
            t.dists[q].push_back(cand[i].first);
            t.ids[q].push_back(cand[i].second);
        }
    }
    return t;
}

KnnGraph graph_from(const NeighborTable& t, std::size_t k) {
    const std::size_t n = t.ids.size();
    KnnGraph g;
    g.k = k;
    g.neighbors.resize(n);
    g.weights.resize(n);
    for (Index q = 0; q < n; ++q) {
        g.neighbors[q].assign(t.ids[q].begin(), t.ids[q].begin() + static_cast<std::ptrdiff_t>(k));
        g.weights[q].assign(t.dists[q].begin(), t.dists[q].begin() + static_cast<std::ptrdiff_t>(k));
        for (double w : g.weights[q]) g.max_weight = std::max(g.max_weight, w);
    }
    g.density.assign(n, 1.0);
    if (g.max_weight > 0.0) {
        const double psi = g.max_weight / 3.0;
        const double two_psi2 = 2.0 * psi * psi;
        const double norm = 1.0 / (std::sqrt(2.0 * std::numbers::pi * psi * psi) *
                                   static_cast<double>(k));
        for (Index q = 0; q < n; ++q) {
            double s = 0.0;
            for (double w : g.weights[q]) s += std::exp(-(w * w) / two_psi2);
            g.density[q] = norm * s;
        }
    }
    return g;
}

void check_k(std::size_t n, std::size_t k, const char* what) {
    if (n < 2) throw OpfError("clustering needs at least 2 samples");
    if (k < 1 || k > n - 1)
        throw OpfError(std::string(what) + " must lie in [1, " + std::to_string(n - 1) + "]");
}

}  // namespace

KnnGraph build_knn_graph(const Dataset& data, std::size_t k, const DistanceFn& d) {
    check_k(data.size(), k, "k");
    return graph_from(nearest(data, k, d), k);
}

ClusterForest cluster(const KnnGraph& graph) {
    const std::size_t n = graph.size();
    ClusterForest f;
    const auto [lo, hi] = std::minmax_element(graph.density.begin(), graph.density.end());
    f.delta = std::max(1e-6 * (*hi - *lo), 1e-12);
    f.predecessor.assign(n, kNoNode);
    f.cost.resize(n);
    f.cluster_label.assign(n, -1);

    // max-cost first, smaller index first among equal costs
    auto cmp = [](const std::pair<double, Index>& a, const std::pair<double, Index>& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    };
    std::set<std::pair<double, Index>, decltype(cmp)> queue(cmp);
    // Arcs joining equal-density nodes are also followed backwards, so a
    // density plateau (duplicates, say) is conquered by a single root.
    std::vector<std::vector<Index>> plateau(n);
    for (Index q = 0; q < n; ++q)
        for (Index u : graph.neighbors[q])
            if (graph.density[u] == graph.density[q] &&
                std::find(graph.neighbors[u].begin(), graph.neighbors[u].end(), q) ==
                    graph.neighbors[u].end())
                plateau[u].push_back(q);

    std::vector<bool> queued(n, true);
    for (Index q = 0; q < n; ++q) {
        f.cost[q] = graph.density[q] - f.delta;
        queue.emplace(f.cost[q], q);
    }

    while (!queue.empty()) {
        const Index q = queue.begin()->second;
        queue.erase(queue.begin());
        queued[q] = false;
        if (f.predecessor[q] == kNoNode) {
            f.cluster_label[q] = static_cast<int>(f.prototypes.size());
            f.prototypes.push_back(q);
            f.cost[q] = graph.density[q];
        }
        auto offer = [&](Index u) {
            if (!queued[u] || !(f.cost[u] < f.cost[q])) return;
            const double cst = std::min(f.cost[q], graph.density[u]);
            if (cst > f.cost[u]) {
                queue.erase({f.cost[u], u});
                f.cluster_label[u] = f.cluster_label[q];
                f.predecessor[u] = q;
                f.cost[u] = cst;
                queue.emplace(cst, u);
            }
        };
        for (Index u : graph.neighbors[q]) offer(u);
        for (Index u : plateau[q]) offer(u);
    }

    f.members.resize(f.prototypes.size());
    for (Index q = 0; q < n; ++q) f.members[static_cast<std::size_t>(f.cluster_label[q])].push_back(q);
    return f;
}

double normalized_cut(const KnnGraph& graph, const ClusterForest& forest) {
    const std::size_t c = forest.cluster_count();
    std::vector<double> intra(c, 0.0), inter(c, 0.0);
    for (Index q = 0; q < graph.size(); ++q) {
        const auto lq = static_cast<std::size_t>(forest.cluster_label[q]);
        for (std::size_t i = 0; i < graph.neighbors[q].size(); ++i) {
            const double w = graph.weights[q][i];
            const double affinity = w > 0.0 ? std::min(1.0 / w, kZeroArcAffinity) : kZeroArcAffinity;
            if (forest.cluster_label[graph.neighbors[q][i]] == forest.cluster_label[q])
                intra[lq] += affinity;
            else
                inter[lq] += affinity;
        }
    }
    double cut = 0.0;
    for (std::size_t i = 0; i < c; ++i)
        if (intra[i] + inter[i] > 0.0) cut += inter[i] / (intra[i] + inter[i]);
    return cut;
}

BestK best_k(const Dataset& data, std::size_t k_max, const DistanceFn& d) {
    check_k(data.size(), k_max, "k_max");
    const auto table = nearest(data, k_max, d);
    BestK best;
    for (std::size_t k = 1; k <= k_max; ++k) {
        auto g = graph_from(table, k);
        auto f = cluster(g);
        const double nc = normalized_cut(g, f);
        best.cuts.push_back(nc);
        if (k == 1 || nc < best.cut) {
            best.k = k;
            best.cut = nc;
            best.graph = std::move(g);
            best.forest = std::move(f);
        }
    }
    return best;
}

}  // namespace opfimb

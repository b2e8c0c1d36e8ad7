#include "opfimb/supervised.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <tuple>

namespace opfimb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_both_classes(const Dataset& ds) {
    if (ds.count(0) == 0 || ds.count(1) == 0)
        throw OpfError("supervised OPF needs samples of both classes");
}

TrainedOpf train_with(const Dataset& ds, std::span<const Index> prototypes,
                      const PairwiseDistances& dist) {
    const std::size_t n = ds.size();
    if (prototypes.empty()) throw OpfError("prototype set is empty");
    TrainedOpf m;
    m.nodes = ds;
    m.prototypes.assign(prototypes.begin(), prototypes.end());
    std::sort(m.prototypes.begin(), m.prototypes.end());
    m.predecessor.assign(n, kNoNode);
    m.cost.assign(n, kInf);
    m.out_label.assign(n, -1);

    std::set<std::pair<double, Index>> queue;
    for (Index p : m.prototypes) {
        if (p >= n) throw OpfError("prototype index out of range");
        m.cost[p] = 0.0;
        m.out_label[p] = ds.label(p);
        queue.emplace(0.0, p);
    }

    while (!queue.empty()) {
        const auto [cq, q] = *queue.begin();
        queue.erase(queue.begin());
        for (Index u = 0; u < n; ++u) {
            if (u == q || !(m.cost[u] > cq)) continue;
            const double cst = std::max(cq, dist(q, u));
            if (cst < m.cost[u]) {
                if (m.cost[u] != kInf) queue.erase({m.cost[u], u});
                m.out_label[u] = m.out_label[q];
                m.predecessor[u] = q;
                m.cost[u] = cst;
                queue.emplace(cst, u);
            }
        }
    }

    m.ordered.resize(n);
    std::iota(m.ordered.begin(), m.ordered.end(), Index{0});
    std::sort(m.ordered.begin(), m.ordered.end(), [&](Index a, Index b) {
        return std::tie(m.cost[a], a) < std::tie(m.cost[b], b);
    });
    return m;
}

std::vector<Index> elect_with(const Dataset& ds, const PairwiseDistances& dist) {
    const std::size_t n = ds.size();
    std::vector<bool> in_tree(n, false);
    std::vector<double> best(n, kInf);
    std::vector<Index> from(n, kNoNode);
    auto key = [](Index a, Index b) { return std::pair{std::min(a, b), std::max(a, b)}; };
    auto better = [&](double w, Index a, Index v) {
        if (w != best[v]) return w < best[v];
        if (from[v] == kNoNode) return true;
        return key(a, v) < key(from[v], v);
    };

    std::vector<bool> is_proto(n, false);
    Index current = 0;
    in_tree[0] = true;
    for (std::size_t added = 1; added < n; ++added) {
        for (Index v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            const double w = dist(current, v);
            if (better(w, current, v)) {
                best[v] = w;
                from[v] = current;
            }
        }
        Index next = kNoNode;
        for (Index v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            if (next == kNoNode || best[v] < best[next] ||
                (best[v] == best[next] && key(from[v], v) < key(from[next], next)))
                next = v;
        }
        in_tree[next] = true;
        if (ds.label(next) != ds.label(from[next])) {
            is_proto[next] = true;
            is_proto[from[next]] = true;
        }
        current = next;
    }
    std::vector<Index> out;
    for (Index i = 0; i < n; ++i)
        if (is_proto[i]) out.push_back(i);
    return out;
}

}  // namespace

std::vector<Index> elect_prototypes(const Dataset& train, const DistanceFn& d) {
    require_both_classes(train);
    PairwiseDistances dist(train, d);
    return elect_with(train, dist);
}

TrainedOpf train(const Dataset& train, std::span<const Index> prototypes, const DistanceFn& d) {
    PairwiseDistances dist(train, d);
    return train_with(train, prototypes, dist);
}

TrainedOpf fit(const Dataset& train, const DistanceFn& d) {
    require_both_classes(train);
    PairwiseDistances dist(train, d);
    const auto protos = elect_with(train, dist);
    return train_with(train, protos, dist);
}

Classification classify(const TrainedOpf& model, std::span<const double> sample,
                        const DistanceFn& d) {
    Classification best{-1, kNoNode, kInf};
    for (Index q : model.ordered) {
        const double cq = model.cost[q];
        if (cq >= best.offered_cost) break;
        const double offer = std::max(cq, distance(d, model.nodes.row(q), sample));
        // nodes arrive in (cost, index) order, so a strict improvement test
        // already prefers the smaller cost and then the smaller index
        if (offer < best.offered_cost) best = {model.out_label[q], q, offer};
    }
    return best;
}

std::vector<int> predict(const TrainedOpf& model, const Dataset& samples, const DistanceFn& d) {
    std::vector<int> out(samples.size());
    for (Index i = 0; i < samples.size(); ++i) out[i] = classify(model, samples.row(i), d).label;
    return out;
}

}  // namespace opfimb

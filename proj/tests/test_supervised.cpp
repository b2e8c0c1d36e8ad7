#include <doctest.h>

#include <numeric>
#include <random>
#include <set>

#include "opfimb/supervised.hpp"
#include "oracles.hpp"

using namespace opfimb;

namespace {

// Reference classifier: scan every node, keep the best offer with the same tie rule.
Classification full_scan(const TrainedOpf& m, std::span<const double> x) {
    Classification best{0, kNoNode, oracle::kInf};
    for (Index q = 0; q < m.nodes.size(); ++q) {
        const double offer = std::max(m.cost[q], euclidean(m.nodes.row(q), x));
        const bool better =
            offer < best.offered_cost ||
            (offer == best.offered_cost &&
             (m.cost[q] < m.cost[best.conqueror] ||
              (m.cost[q] == m.cost[best.conqueror] && q < best.conqueror)));
        if (best.conqueror == kNoNode || better) best = {m.out_label[q], q, offer};
    }
    return best;
}

// Prototypes from a Kruskal MST over all edges (an independent MST routine).
std::vector<Index> crossing_endpoints(const Dataset& ds) {
    const auto d = oracle::distance_matrix(ds);
    const auto n = ds.size();
    struct Edge {
        double w;
        Index a, b;
    };
    std::vector<Edge> edges;
    for (Index a = 0; a < n; ++a)
        for (Index b = a + 1; b < n; ++b) edges.push_back({d[a][b], a, b});
    std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) {
        return std::tie(x.w, x.a, x.b) < std::tie(y.w, y.a, y.b);
    });
    std::vector<Index> parent(n);
    std::iota(parent.begin(), parent.end(), Index{0});
    auto root = [&](Index x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::set<Index> protos;
    for (const auto& e : edges) {
        auto ra = root(e.a), rb = root(e.b);
        if (ra == rb) continue;
        parent[ra] = rb;
        if (ds.label(e.a) != ds.label(e.b)) {
            protos.insert(e.a);
            protos.insert(e.b);
        }
    }
    return {protos.begin(), protos.end()};
}

void check_forest_invariants(const TrainedOpf& m) {
    const auto n = m.nodes.size();
    for (Index u = 0; u < n; ++u) {
        Index at = u;
        std::size_t steps = 0;
        while (m.predecessor[at] != kNoNode && steps <= n) {
            at = m.predecessor[at];
            ++steps;
        }
        CHECK(steps <= n);
        CHECK(std::binary_search(m.prototypes.begin(), m.prototypes.end(), at));
        CHECK(m.out_label[u] == m.nodes.label(at));
        if (m.predecessor[u] == kNoNode) {
            CHECK(m.cost[u] == 0.0);
        } else {
            const auto p = m.predecessor[u];
            CHECK(m.cost[u] == std::max(m.cost[p], euclidean(m.nodes.row(p), m.nodes.row(u))));
        }
        for (Index q = 0; q < n; ++q)
            CHECK(m.cost[u] <= std::max(m.cost[q], euclidean(m.nodes.row(q), m.nodes.row(u))));
    }
    CHECK(m.ordered.size() == n);
    for (std::size_t i = 1; i < n; ++i) CHECK(m.cost[m.ordered[i - 1]] <= m.cost[m.ordered[i]]);
}

}  // namespace

TEST_SUITE("supervised") {
    TEST_CASE("prototype election on small lines") {
        CHECK(elect_prototypes(Dataset::from_rows({{0}, {1}}, {0, 1})) == std::vector<Index>{0, 1});
        CHECK(elect_prototypes(Dataset::from_rows({{0}, {1}, {5}, {6}}, {0, 0, 1, 1})) ==
              std::vector<Index>{1, 2});
        CHECK(elect_prototypes(Dataset::from_rows({{0}, {1}, {2}, {3}}, {0, 1, 0, 1})) ==
              std::vector<Index>{0, 1, 2, 3});
        CHECK_THROWS_AS(elect_prototypes(Dataset::from_rows({{0}, {1}}, {0, 0})), OpfError);
    }

    TEST_CASE("election agrees with a Kruskal MST on tie-free data") {
        std::mt19937_64 gen(21);
        for (int t = 0; t < 50; ++t) {
            auto ds = oracle::random_dataset(gen, 4 + t % 20, 1 + t % 3);
            CHECK(elect_prototypes(ds) == crossing_endpoints(ds));
        }
    }

    TEST_CASE("three-node chain") {
        // P at 0, a at 2, b at 5: d(P,a) = 2, d(a,b) = 3
        auto ds = Dataset::from_rows({{0}, {2}, {5}}, {1, 0, 0});
        const std::vector<Index> protos{0};
        auto m = train(ds, protos);
        CHECK(m.cost[0] == 0.0);
        CHECK(m.cost[1] == 2.0);
        CHECK(m.cost[2] == 3.0);
        CHECK(m.out_label[2] == 1);
        CHECK(m.predecessor[2] == 1);
        CHECK(m.predecessor[0] == kNoNode);
    }

    TEST_CASE("costs match path enumeration on small sets") {
        std::mt19937_64 gen(5);
        for (int t = 0; t < 40; ++t) {
            auto ds = oracle::random_dataset(gen, 3 + t % 6, 1 + t % 3, t % 2 == 0);
            auto m = fit(ds);
            auto want = oracle::minimax_by_paths(oracle::distance_matrix(ds), m.prototypes);
            for (Index u = 0; u < ds.size(); ++u) CHECK(m.cost[u] == want[u]);
            check_forest_invariants(m);
        }
    }

    TEST_CASE("costs match the threshold oracle up to 12 nodes") {
        std::mt19937_64 gen(6);
        for (int t = 0; t < 60; ++t) {
            auto ds = oracle::random_dataset(gen, 2 + t % 11, 1 + t % 3, t % 3 == 0);
            auto m = fit(ds);
            auto want = oracle::minimax_by_thresholds(oracle::distance_matrix(ds), m.prototypes);
            for (Index u = 0; u < ds.size(); ++u) CHECK(m.cost[u] == want[u]);
        }
    }

    TEST_CASE("nearer prototype wins") {
        auto m = fit(Dataset::from_rows({{0}, {10}}, {0, 1}));
        const std::vector<double> x{2.0};
        auto c = classify(m, x);
        CHECK(c.label == 0);
        CHECK(c.conqueror == 0);
        CHECK(c.offered_cost == 2.0);
    }

    TEST_CASE("early-stop scan equals the full scan") {
        std::mt19937_64 gen(8);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        for (int t = 0; t < 200; ++t) {
            auto ds = oracle::random_dataset(gen, 5 + t % 30, 1 + t % 4, t % 4 == 0);
            auto m = fit(ds);
            std::vector<double> x(ds.dim());
            for (auto& v : x) v = t % 4 == 0 ? std::round(u(gen)) : u(gen);
            auto fast = classify(m, x);
            auto slow = full_scan(m, x);
            CHECK(fast.conqueror == slow.conqueror);
            CHECK(fast.label == slow.label);
            CHECK(fast.offered_cost == slow.offered_cost);
        }
    }

    TEST_CASE("training samples classify to their own label") {
        std::mt19937_64 gen(13);
        auto ds = oracle::random_dataset(gen, 60, 2);
        auto m = fit(ds);
        for (Index u = 0; u < ds.size(); ++u) {
            auto c = classify(m, ds.row(u));
            CHECK(c.offered_cost == m.cost[u]);
            CHECK(c.label == m.out_label[u]);
        }
        CHECK(predict(m, ds) == predict(m, ds));
    }

    TEST_CASE("custom distance is honoured") {
        DistanceFn manhattan = [](std::span<const double> a, std::span<const double> b) {
            double s = 0;
            for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
            return s;
        };
        auto ds = Dataset::from_rows({{0, 0}, {1, 1}, {3, 3}}, {0, 0, 1});
        auto m = fit(ds, manhattan);
        CHECK(m.cost[0] == 2.0);
    }
}

#include "opfimb/undersampling.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace opfimb {

std::string_view to_string(UnderPolicy p) {
    switch (p) {
        case UnderPolicy::US: return "US";
        case UnderPolicy::US1: return "US1";
        case UnderPolicy::US2: return "US2";
        case UnderPolicy::US3: return "US3";
    }
    return "?";
}

ScoreMap score_training(const Dataset& train, const Dataset& val, const DistanceFn& d) {
    if (val.empty()) throw OpfError("validation set is empty");
    const auto model = fit(train, d);
    ScoreMap s;
    s.score.assign(train.size(), 0);
    s.cost = model.cost;
    for (Index t = 0; t < val.size(); ++t) {
        const auto c = classify(model, val.row(t), d);
        s.score[c.conqueror] += c.label == val.label(t) ? 1 : -1;
    }
    return s;
}

UnderResult prune(const Dataset& train, std::span<const int> score,
                  std::span<const double> tie_cost, UnderPolicy policy) {
    const std::size_t n = train.size();
    if (score.size() != n || tie_cost.size() != n)
        throw OpfError("score map does not match the training set");
    if (train.count(0) < 2 || train.count(1) < 2)
        throw OpfError("undersampling needs at least 2 samples per class");

    const int majority = train.majority_label();
    std::vector<bool> drop(n, false);
    switch (policy) {
        case UnderPolicy::US: {
            auto cand = train.indices_of(majority);
            std::sort(cand.begin(), cand.end(), [&](Index a, Index b) {
                return std::tie(score[a], tie_cost[a], a) < std::tie(score[b], tie_cost[b], b);
            });
            const std::size_t n_r = train.majority_count() - train.minority_count();
            for (std::size_t i = 0; i < n_r; ++i) drop[cand[i]] = true;
            break;
        }
        case UnderPolicy::US1:
            for (Index i = 0; i < n; ++i) drop[i] = train.label(i) == majority && score[i] < 0;
            break;
        case UnderPolicy::US2:
            for (Index i = 0; i < n; ++i) drop[i] = train.label(i) == majority && score[i] <= 0;
            break;
        case UnderPolicy::US3:
            for (Index i = 0; i < n; ++i) drop[i] = score[i] < 0;
            break;
    }

    UnderResult r;
    for (int c = 0; c < 2; ++c) {
        const auto members = train.indices_of(c);
        const bool emptied = std::all_of(members.begin(), members.end(),
                                         [&](Index i) { return drop[i]; });
        if (!emptied) continue;
        // keep the highest score; smaller cost, then smaller index, on ties
        const Index keep = *std::min_element(members.begin(), members.end(), [&](Index a, Index b) {
            return std::tuple(-score[a], tie_cost[a], a) < std::tuple(-score[b], tie_cost[b], b);
        });
        drop[keep] = false;
        r.guard_fired = true;
    }

    std::vector<Index> kept;
    for (Index i = 0; i < n; ++i) (drop[i] ? r.removed : kept).push_back(i);
    r.data = train.subset(kept);
    return r;
}

UnderResult undersample(const Dataset& train, const Dataset& val, UnderPolicy policy,
                        const DistanceFn& d) {
    if (train.count(0) < 2 || train.count(1) < 2)
        throw OpfError("undersampling needs at least 2 samples per class");
    const auto s = score_training(train, val, d);
    return prune(train, s.score, s.cost, policy);
}

}  // namespace opfimb

#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "opfimb/dataset.hpp"
#include "opfimb/distance.hpp"
#include "opfimb/supervised.hpp"

namespace opfimb {

/// Per-training-sample relevance: +1 for every validation sample it
/// conquered with the right label, -1 for every wrong one.
struct ScoreMap {
    std::vector<int> score;
    /// Path cost of each training node in the model that produced the scores.
    std::vector<double> cost;
};

enum class UnderPolicy {
    /// remove the lowest-scored majority samples until the classes balance
    US,
    /// remove majority samples with negative score
    US1,
    /// remove majority samples with score <= 0
    US2,
    /// remove every sample with negative score
    US3,
};

std::string_view to_string(UnderPolicy p);

ScoreMap score_training(const Dataset& train, const Dataset& val, const DistanceFn& d = {});

struct UnderResult {
    Dataset data;
    /// Row indices of the input that were dropped, ascending.
    std::vector<Index> removed;
    /// A class would have been emptied; its best-scored sample was kept.
    bool guard_fired = false;
};

/// Applies a pruning policy to precomputed scores. `tie_cost` orders equal
/// scores for US (smaller first); the index breaks remaining ties.
UnderResult prune(const Dataset& train, std::span<const int> score,
                  std::span<const double> tie_cost, UnderPolicy policy);

/// score_training on (train, val) followed by prune.
UnderResult undersample(const Dataset& train, const Dataset& val, UnderPolicy policy,
                        const DistanceFn& d = {});

}  // namespace opfimb

#pragma once

#include "opfimb/oversampling.hpp"
#include "opfimb/undersampling.hpp"

namespace opfimb {

/// Score-based pruning followed by O2PF oversampling of the pruned set.
struct HybridPolicy {
    UnderPolicy under = UnderPolicy::US1;
    OverPolicy over{};
};

struct HybridResult {
    Dataset data;
    UnderResult pruned;
    /// Synthetic rows added after pruning; 0 when pruning already balanced the set.
    std::size_t n_s = 0;
    std::size_t k_star = 0;
    /// Pruning left fewer than 2 minority samples, so no generator could be fitted.
    bool oversample_skipped = false;
};

HybridResult hybrid_resample(const Dataset& train, const Dataset& val, const HybridPolicy& policy,
                             RandomSource& rng, const DistanceFn& d = {});

/// Second stage on its own, for callers that computed the pruning elsewhere.
HybridResult hybrid_from_pruned(UnderResult pruned, const OverPolicy& over, RandomSource& rng,
                                const DistanceFn& d = {});

}  // namespace opfimb

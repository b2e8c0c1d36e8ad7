#include "opfimb/hybrid.hpp"

namespace opfimb {

HybridResult hybrid_from_pruned(UnderResult pruned, const OverPolicy& over, RandomSource& rng,
                                const DistanceFn& d) {
    HybridResult r;
    const auto& ds = pruned.data;
    r.n_s = ds.majority_count() - ds.minority_count();
    if (r.n_s == 0) {
        r.data = ds;
    } else if (ds.minority_count() < 2) {
        r.data = ds;
        r.oversample_skipped = true;
    } else {
        auto o = oversample(ds, r.n_s, over, rng, d);
        r.data = std::move(o.data);
        r.k_star = o.k_star;
    }
    r.pruned = std::move(pruned);
    return r;
}

HybridResult hybrid_resample(const Dataset& train, const Dataset& val, const HybridPolicy& policy,
                             RandomSource& rng, const DistanceFn& d) {
    if (policy.under == UnderPolicy::US)
        throw OpfError("hybrid pipelines take US1, US2 or US3; plain US already balances");
    return hybrid_from_pruned(undersample(train, val, policy.under, d), policy.over, rng, d);
}

}  // namespace opfimb

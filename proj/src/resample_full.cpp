#include <limits>
#include <unordered_map>

#include "opfimb/evaluation.hpp"

namespace opfimb {

namespace {

UnderPolicy under_policy(Method m) {
    switch (m) {
        case Method::OpfUs: return UnderPolicy::US;
        case Method::OpfUs1:
        case Method::Us1O2pf: return UnderPolicy::US1;
        case Method::OpfUs2:
        case Method::Us2O2pf: return UnderPolicy::US2;
        default: return UnderPolicy::US3;
    }
}

OverVariant over_variant(Method m) {
    switch (m) {
        case Method::O2pfRi: return OverVariant::RI;
        case Method::O2pfMi: return OverVariant::MI;
        case Method::O2pfP: return OverVariant::P;
        case Method::O2pfWi: return OverVariant::WI;
        default: return OverVariant::O2PF;
    }
}

bool is_hybrid(Method m) {
    return m == Method::Us1O2pf || m == Method::Us2O2pf || m == Method::Us3O2pf;
}

}  // namespace

FullResample resample_full(const Dataset& ds, Method m, std::size_t param, double val_fraction,
                           RandomSource& rng, const DistanceFn& d) {
    if (m == Method::Original) return {ds, false};
    if (param == 0) throw OpfError("resampling parameter must be positive");

    if (uses_scores(m)) {
        auto [rest, val] = holdout(ds, val_fraction, rng);
        const auto s = score_training(rest, val, d);
        std::unordered_map<SampleId, Index> row_of;
        for (Index i = 0; i < ds.size(); ++i) row_of.emplace(ds.id(i), i);
        // held-out rows take a neutral score and sort after scored rows of equal score
        std::vector<int> score(ds.size(), 0);
        std::vector<double> cost(ds.size(), std::numeric_limits<double>::infinity());
        for (Index i = 0; i < rest.size(); ++i) {
            const auto row = row_of.at(rest.id(i));
            score[row] = s.score[i];
            cost[row] = s.cost[i];
        }
        auto pruned = prune(ds, score, cost, under_policy(m));
        const bool guard = pruned.guard_fired;
        if (!is_hybrid(m)) return {std::move(pruned.data), guard};
        auto rng_over = rng.spawn(1);
        auto h = hybrid_from_pruned(std::move(pruned), {OverVariant::O2PF, param}, *rng_over, d);
        return {std::move(h.data), guard};
    }

    const auto n_s = ds.majority_count() - ds.minority_count();
    if (n_s == 0) return {ds, false};
    if (m == Method::Smote) return {smote_baseline(ds, n_s, param, rng, d), false};
    return {oversample(ds, n_s, {over_variant(m), param}, rng, d).data, false};
}

}  // namespace opfimb

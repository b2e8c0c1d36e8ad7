#include <algorithm>

#include "opfimb/evaluation.hpp"

namespace opfimb {

Dataset smote_baseline(const Dataset& train, std::size_t n_s, std::size_t k, RandomSource& rng,
                       const DistanceFn& d) {
    if (n_s == 0) throw OpfError("number of synthetic samples must be positive");
    const int minority = train.minority_label();
    const auto rows = train.indices_of(minority);
    if (rows.size() < 2) throw OpfError("SMOTE needs at least 2 minority samples");
    k = std::clamp<std::size_t>(k, 1, rows.size() - 1);

    std::vector<std::vector<Index>> knn(rows.size());
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        cand.clear();
        for (std::size_t j = 0; j < rows.size(); ++j)
            if (j != i) cand.emplace_back(distance(d, train.row(rows[i]), train.row(rows[j])), j);
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
        for (std::size_t t = 0; t < k; ++t) knn[i].push_back(cand[t].second);
    }

    Dataset synth(train.dim(), {}, {}, {}, {}, train.schema_ptr());
    SampleId next_id = train.max_id() + 1;
    std::vector<double> z(train.dim());
    for (std::size_t s = 0; s < n_s; ++s) {
        const auto i = rng.below(static_cast<std::uint32_t>(rows.size()));
        const auto j = knn[i][rng.below(static_cast<std::uint32_t>(k))];
        const double u = rng.uniform();
        const auto x = train.row(rows[i]);
        const auto xh = train.row(rows[j]);
        for (std::size_t c = 0; c < z.size(); ++c) z[c] = x[c] + u * (xh[c] - x[c]);
        synth.push_back(z, minority, next_id++, true);
    }
    return train.concat(synth);
}

}  // namespace opfimb

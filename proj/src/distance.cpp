#include "opfimb/distance.hpp"

#include <cmath>

namespace opfimb {

double euclidean(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return std::sqrt(s);
}

PairwiseDistances::PairwiseDistances(const Dataset& ds, DistanceFn d, std::size_t cache_limit)
    : ds_(&ds), fn_(std::move(d)), n_(ds.size()) {
    if (n_ < 2 || n_ > cache_limit) return;
    cache_.resize(n_ * (n_ - 1) / 2);
    std::size_t k = 0;
    for (Index a = 0; a < n_; ++a)
        for (Index b = a + 1; b < n_; ++b) cache_[k++] = distance(fn_, ds.row(a), ds.row(b));
}

}  // namespace opfimb

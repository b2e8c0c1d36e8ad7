#pragma once

#include <functional>
#include <span>
#include <vector>

#include "opfimb/dataset.hpp"

namespace opfimb {

/// Symmetric, non-negative dissimilarity with d(x, x) = 0. An empty function
/// means Euclidean distance, which also takes the inlined fast path.
using DistanceFn = std::function<double(std::span<const double>, std::span<const double>)>;

double euclidean(std::span<const double> a, std::span<const double> b);

inline double distance(const DistanceFn& d, std::span<const double> a,
                       std::span<const double> b) {
    return d ? d(a, b) : euclidean(a, b);
}

/// Pairwise distances over one dataset. Datasets with at most `cache_limit`
/// rows get a precomputed upper-triangular table; larger ones are evaluated
/// on demand.
class PairwiseDistances {
public:
    static constexpr std::size_t kDefaultCacheLimit = 4096;

    PairwiseDistances(const Dataset& ds, DistanceFn d,
                      std::size_t cache_limit = kDefaultCacheLimit);

    double operator()(Index a, Index b) const {
        if (a == b) return 0.0;
        if (!cache_.empty()) {
            if (a > b) std::swap(a, b);
            // row a holds pairs (a, a+1..n-1)
            return cache_[a * n_ - a * (a + 1) / 2 + (b - a - 1)];
        }
        return distance(fn_, ds_->row(a), ds_->row(b));
    }

    bool cached() const { return !cache_.empty(); }
    std::size_t size() const { return n_; }

private:
    const Dataset* ds_;
    DistanceFn fn_;
    std::size_t n_;
    std::vector<double> cache_;
};

}  // namespace opfimb

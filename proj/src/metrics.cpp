#include "opfimb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "opfimb/dataset.hpp"

namespace opfimb {

namespace {

// Doubled average ranks of |diffs| (integers, so sums compare exactly).
std::vector<std::int64_t> doubled_ranks(std::span<const double> diffs) {
    const std::size_t n = diffs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(diffs[a]) < std::abs(diffs[b]);
    });
    std::vector<std::int64_t> r(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && std::abs(diffs[order[j + 1]]) == std::abs(diffs[order[i]])) ++j;
        // ranks i+1..j+1 averaged, doubled
        const auto twice_avg = static_cast<std::int64_t>(i + 1 + j + 1);
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = twice_avg;
        i = j + 1;
    }
    return r;
}

std::vector<double> nonzero_diffs(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw OpfError("paired samples differ in length");
    std::vector<double> d;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] - b[i] != 0.0) d.push_back(a[i] - b[i]);
    return d;
}

}  // namespace

double f1_score(std::span<const int> truth, std::span<const int> predicted, int positive) {
    if (truth.size() != predicted.size()) throw OpfError("label lists differ in length");
    if (truth.empty()) throw OpfError("label lists are empty");
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool t = truth[i] == positive, p = predicted[i] == positive;
        tp += t && p;
        fp += !t && p;
        fn += t && !p;
    }
    if (tp == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    const double recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    return 2.0 * precision * recall / (precision + recall);
}

double wilcoxon_exact_p(std::span<const double> diffs) {
    const std::size_t n = diffs.size();
    if (n == 0) return 1.0;
    if (n > 30) throw OpfError("exact Wilcoxon enumeration limited to 30 pairs");
    const auto r = doubled_ranks(diffs);
    const std::int64_t total = std::accumulate(r.begin(), r.end(), std::int64_t{0});
    std::int64_t observed = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (diffs[i] > 0) observed += r[i];
    const std::int64_t dev = std::abs(2 * observed - total);
    const std::uint64_t patterns = std::uint64_t{1} << n;
    std::uint64_t extreme = 0;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        std::int64_t w = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1u) w += r[i];
        if (std::abs(2 * w - total) >= dev) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(patterns);
}

double wilcoxon_normal_p(std::span<const double> diffs) {
    const std::size_t n = diffs.size();
    if (n == 0) return 1.0;
    const auto r = doubled_ranks(diffs);
    double w_plus = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (diffs[i] > 0) w_plus += static_cast<double>(r[i]) / 2.0;
    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    double tie_term = 0.0;
    auto sorted = r;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    if (var <= 0.0) return 1.0;
    const double num = std::abs(w_plus - mean) - 0.5;
    if (num <= 0.0) return 1.0;
    const double z = num / std::sqrt(var);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha) {
    const auto diffs = nonzero_diffs(a, b);
    WilcoxonResult res;
    res.n = diffs.size();
    if (diffs.empty()) return res;
    const auto r = doubled_ranks(diffs);
    for (std::size_t i = 0; i < diffs.size(); ++i)
        if (diffs[i] > 0) res.w_plus += static_cast<double>(r[i]) / 2.0;
    res.exact = diffs.size() < 10;
    res.p = res.exact ? wilcoxon_exact_p(diffs) : wilcoxon_normal_p(diffs);
    res.significant = res.p < alpha;
    return res;
}

}  // namespace opfimb

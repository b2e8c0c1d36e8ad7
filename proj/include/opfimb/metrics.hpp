#pragma once

#include <cstddef>
#include <span>

namespace opfimb {

/// F1 of the `positive` class; 0 when precision + recall is 0.
double f1_score(std::span<const int> truth, std::span<const int> predicted, int positive);

struct WilcoxonResult {
    double p = 1.0;
    bool significant = false;
    /// Pairs left after dropping zero differences.
    std::size_t n = 0;
    /// Rank sum of the positive differences.
    double w_plus = 0.0;
    bool exact = false;
};

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// are dropped and tied magnitudes share their average rank. Fewer than 10
/// remaining pairs: exact enumeration of all 2^n sign patterns; otherwise the
/// normal approximation with tie and continuity corrections.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    double alpha = 0.05);

/// Exact two-sided p for non-zero differences (at most 30).
double wilcoxon_exact_p(std::span<const double> diffs);
/// Normal-approximation two-sided p for non-zero differences.
double wilcoxon_normal_p(std::span<const double> diffs);

}  // namespace opfimb

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "opfimb/dataset.hpp"
#include "opfimb/distance.hpp"
#include "opfimb/hybrid.hpp"
#include "opfimb/metrics.hpp"
#include "opfimb/oversampling.hpp"
#include "opfimb/random.hpp"
#include "opfimb/undersampling.hpp"

namespace opfimb {

/// SMOTE: each synthetic is x + u * (x_hat - x) for a random minority sample x,
/// a random one of its k nearest minority neighbours x_hat and u ~ U(0, 1).
/// k is clamped to minority size - 1.
Dataset smote_baseline(const Dataset& train, std::size_t n_s, std::size_t k, RandomSource& rng,
                       const DistanceFn& d = {});

enum class Method {
    Original,
    O2pf,
    O2pfRi,
    O2pfMi,
    O2pfP,
    O2pfWi,
    OpfUs,
    OpfUs1,
    OpfUs2,
    OpfUs3,
    Us1O2pf,
    Us2O2pf,
    Us3O2pf,
    Smote,
};

/// Every method, ORIGINAL first.
std::span<const Method> all_methods();
std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
/// Needs OPF-US validation scores (undersamplers and hybrids).
bool uses_scores(Method m);
/// Has a hyperparameter tuned on the validation split.
bool is_tuned(Method m);

/// Resamples `train`; `param` is k_max for O2PF-based methods, k for SMOTE,
/// ignored otherwise. `val` feeds the score map where one is needed.
using Resampler = std::function<Dataset(const Dataset& train, const Dataset& val,
                                        std::size_t param, RandomSource& rng)>;

Resampler make_resampler(Method m, const DistanceFn& d = {});

struct FullResample {
    Dataset data;
    /// A pruning policy would have emptied a class.
    bool guard_fired = false;
};

/// Resamples a complete dataset with no test hold-out. Score-based methods
/// carve a stratified `val_fraction` slice out for scoring and then prune the
/// whole set, the held-out rows taking score 0 and ranking after scored rows.
/// `param` is k_max (or SMOTE's k).
FullResample resample_full(const Dataset& ds, Method m, std::size_t param, double val_fraction,
                           RandomSource& rng, const DistanceFn& d = {});

inline const std::vector<std::size_t> kDefaultKmaxGrid{5, 10, 20, 30, 40, 50};
inline const std::vector<std::size_t> kDefaultSmoteGrid{5, 6, 7, 8, 9, 10};

struct TuneResult {
    /// Grid value as given (before clamping).
    std::size_t chosen = 0;
    double f1 = 0.0;
    /// Validation F1 per grid entry.
    std::vector<double> f1_per_value;
    /// Training set produced with the chosen value.
    Dataset resampled;
};

/// For each grid value (clamped to minority size - 1) resample with
/// rng.spawn(position), fit supervised OPF and score F1 on `val`; keeps the
/// best value, the smaller one on ties.
TuneResult tune_kmax(const Dataset& train, const Dataset& val, const Resampler& method,
                     std::span<const std::size_t> grid, RandomSource& rng, int positive,
                     const DistanceFn& d = {});

struct RunResult {
    std::string method;
    std::size_t run = 0;
    std::uint64_t seed = 0;
    double f1 = 0.0;
    double elapsed = 0.0;
    /// Tuned hyperparameter, when the method has one.
    std::optional<std::size_t> param;
};

struct MethodSummary {
    std::string method;
    double mean = 0.0;
    double std = 0.0;
};

struct PairwiseTest {
    std::string a;
    std::string b;
    double p = 1.0;
    bool significant = false;
};

struct ExperimentReport {
    std::string dataset;
    /// Free-form provenance line (the CLI echoes its flags here).
    std::string header;
    std::size_t runs = 0;
    std::uint64_t base_seed = 0;
    std::vector<RunResult> results;
    std::vector<MethodSummary> summary;
    std::vector<PairwiseTest> tests;

    std::vector<double> f1_of(std::string_view method) const;
};

struct ExperimentOptions {
    std::vector<std::size_t> kmax_grid = kDefaultKmaxGrid;
    std::vector<std::size_t> smote_grid = kDefaultSmoteGrid;
    SplitSpec split{};
    /// Fit the scaler on each run's training partition instead of the full dataset.
    bool fit_scaler_on_train = false;
    /// Store wall-clock seconds per (method, run); otherwise elapsed stays 0 so
    /// reports are byte-reproducible.
    bool record_timing = false;
    double alpha = 0.05;
    DistanceFn distance{};
    /// Called with every resampled training set, for protocol checks.
    std::function<void(Method, std::size_t run, const Split&, const Dataset&)> observer;
};

/// Seed of run r: derive_seed(base_seed, r).
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run);

/// Repeated 70/15/15 holdout. ORIGINAL is always evaluated; all methods of a
/// run share one split. F1 is measured on the minority class of `ds`.
ExperimentReport run_experiment(const Dataset& ds, std::span<const Method> methods,
                                std::size_t runs, std::uint64_t base_seed,
                                const ExperimentOptions& options = {});

/// Recomputes summary and pairwise tests from `results`.
void summarize(ExperimentReport& report, double alpha = 0.05);

/// Key/value text report: header block, one [run] record per (method, run),
/// one [summary] block per method and one [wilcoxon] block per method pair.
std::string format_report(const ExperimentReport& report);
ExperimentReport parse_report(const std::string& text);
/// method,run,seed,f1,elapsed
std::string format_results_csv(const ExperimentReport& report);

}  // namespace opfimb

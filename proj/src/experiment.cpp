#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>

#include "opfimb/evaluation.hpp"
#include "opfimb/supervised.hpp"

namespace opfimb {

namespace {

struct MethodInfo {
    Method method;
    std::string_view name;
};

constexpr std::array kMethods{
    MethodInfo{Method::Original, "original"}, MethodInfo{Method::O2pf, "o2pf"},
    MethodInfo{Method::O2pfRi, "o2pf-ri"},    MethodInfo{Method::O2pfMi, "o2pf-mi"},
    MethodInfo{Method::O2pfP, "o2pf-p"},      MethodInfo{Method::O2pfWi, "o2pf-wi"},
    MethodInfo{Method::OpfUs, "opf-us"},      MethodInfo{Method::OpfUs1, "opf-us1"},
    MethodInfo{Method::OpfUs2, "opf-us2"},    MethodInfo{Method::OpfUs3, "opf-us3"},
    MethodInfo{Method::Us1O2pf, "us1-o2pf"},  MethodInfo{Method::Us2O2pf, "us2-o2pf"},
    MethodInfo{Method::Us3O2pf, "us3-o2pf"},  MethodInfo{Method::Smote, "smote"},
};

constexpr std::array kMethodList{
    Method::Original, Method::O2pf,   Method::O2pfRi, Method::O2pfMi,  Method::O2pfP,
    Method::O2pfWi,   Method::OpfUs,  Method::OpfUs1, Method::OpfUs2,  Method::OpfUs3,
    Method::Us1O2pf,  Method::Us2O2pf, Method::Us3O2pf, Method::Smote,
};

std::size_t balance_gap(const Dataset& ds) { return ds.majority_count() - ds.minority_count(); }

Resampler oversampler(OverVariant v, const DistanceFn& d) {
    return [v, d](const Dataset& train, const Dataset&, std::size_t k_max, RandomSource& rng) {
        const auto n_s = balance_gap(train);
        if (n_s == 0) return train;
        return oversample(train, n_s, OverPolicy{v, k_max}, rng, d).data;
    };
}

Resampler undersampler(UnderPolicy p, const DistanceFn& d) {
    return [p, d](const Dataset& train, const Dataset& val, std::size_t, RandomSource&) {
        return undersample(train, val, p, d).data;
    };
}

Resampler hybrid(UnderPolicy p, const DistanceFn& d) {
    return [p, d](const Dataset& train, const Dataset& val, std::size_t k_max, RandomSource& rng) {
        return hybrid_resample(train, val, HybridPolicy{p, OverPolicy{OverVariant::O2PF, k_max}},
                               rng, d)
            .data;
    };
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::span<const Method> all_methods() { return kMethodList; }

std::string_view method_name(Method m) {
    for (const auto& info : kMethods)
        if (info.method == m) return info.name;
    return "?";
}

std::optional<Method> parse_method(std::string_view name) {
    for (const auto& info : kMethods)
        if (info.name == name) return info.method;
    return std::nullopt;
}

bool uses_scores(Method m) {
    switch (m) {
        case Method::OpfUs:
        case Method::OpfUs1:
        case Method::OpfUs2:
        case Method::OpfUs3:
        case Method::Us1O2pf:
        case Method::Us2O2pf:
        case Method::Us3O2pf:
            return true;
        default:
            return false;
    }
}

bool is_tuned(Method m) {
    switch (m) {
        case Method::Original:
        case Method::OpfUs:
        case Method::OpfUs1:
        case Method::OpfUs2:
        case Method::OpfUs3:
            return false;
        default:
            return true;
    }
}

Resampler make_resampler(Method m, const DistanceFn& d) {
    switch (m) {
        case Method::Original:
            return [](const Dataset& train, const Dataset&, std::size_t, RandomSource&) {
                return train;
            };
        case Method::O2pf: return oversampler(OverVariant::O2PF, d);
        case Method::O2pfRi: return oversampler(OverVariant::RI, d);
        case Method::O2pfMi: return oversampler(OverVariant::MI, d);
        case Method::O2pfP: return oversampler(OverVariant::P, d);
        case Method::O2pfWi: return oversampler(OverVariant::WI, d);
        case Method::OpfUs: return undersampler(UnderPolicy::US, d);
        case Method::OpfUs1: return undersampler(UnderPolicy::US1, d);
        case Method::OpfUs2: return undersampler(UnderPolicy::US2, d);
        case Method::OpfUs3: return undersampler(UnderPolicy::US3, d);
        case Method::Us1O2pf: return hybrid(UnderPolicy::US1, d);
        case Method::Us2O2pf: return hybrid(UnderPolicy::US2, d);
        case Method::Us3O2pf: return hybrid(UnderPolicy::US3, d);
        case Method::Smote:
            return [d](const Dataset& train, const Dataset&, std::size_t k, RandomSource& rng) {
                const auto n_s = balance_gap(train);
                if (n_s == 0) return train;
                return smote_baseline(train, n_s, k, rng, d);
            };
    }
    throw OpfError("unknown method");
}

TuneResult tune_kmax(const Dataset& train, const Dataset& val, const Resampler& method,
                     std::span<const std::size_t> grid, RandomSource& rng, int positive,
                     const DistanceFn& d) {
    if (grid.empty()) throw OpfError("hyperparameter grid is empty");
    const std::size_t cap = std::max<std::size_t>(train.minority_count(), 2) - 1;
    TuneResult best;
    const std::vector<int> truth(val.labels().begin(), val.labels().end());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == 0) throw OpfError("grid values must be positive");
        const std::size_t value = std::min(grid[i], cap);
        auto child = rng.spawn(i);
        auto resampled = method(train, val, value, *child);
        const auto model = fit(resampled, d);
        const double f1 = f1_score(truth, predict(model, val, d), positive);
        best.f1_per_value.push_back(f1);
        const bool better = i == 0 || f1 > best.f1 || (f1 == best.f1 && grid[i] < best.chosen);
        if (better) {
            best.chosen = grid[i];
            best.f1 = f1;
            best.resampled = std::move(resampled);
        }
    }
    return best;
}

std::vector<double> ExperimentReport::f1_of(std::string_view method) const {
    std::vector<double> out;
    for (const auto& r : results)
        if (r.method == method) out.push_back(r.f1);
    return out;
}

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t run) {
    return derive_seed(base_seed, run);
}

void summarize(ExperimentReport& report, double alpha) {
    std::vector<std::string> names;
    for (const auto& r : report.results)
        if (std::find(names.begin(), names.end(), r.method) == names.end()) names.push_back(r.method);
    report.summary.clear();
    report.tests.clear();
    for (const auto& name : names) {
        const auto f1 = report.f1_of(name);
        MethodSummary s{name, 0.0, 0.0};
        s.mean = std::accumulate(f1.begin(), f1.end(), 0.0) / static_cast<double>(f1.size());
        if (f1.size() > 1) {
            double ss = 0.0;
            for (double v : f1) ss += (v - s.mean) * (v - s.mean);
            s.std = std::sqrt(ss / static_cast<double>(f1.size() - 1));
        }
        report.summary.push_back(s);
    }
    for (std::size_t i = 0; i < names.size(); ++i)
        for (std::size_t j = i + 1; j < names.size(); ++j) {
            const auto a = report.f1_of(names[i]);
            const auto b = report.f1_of(names[j]);
            const auto w = wilcoxon_signed_rank(a, b, alpha);
            report.tests.push_back({names[i], names[j], w.p, w.significant});
        }
}

ExperimentReport run_experiment(const Dataset& ds, std::span<const Method> methods,
                                std::size_t runs, std::uint64_t base_seed,
                                const ExperimentOptions& options) {
    if (runs < 1) throw OpfError("runs must be at least 1");
    std::vector<Method> order{Method::Original};
    for (Method m : methods)
        if (std::find(order.begin(), order.end(), m) == order.end()) order.push_back(m);

    const int positive = ds.minority_label();
    const Dataset imputed = impute_mean(ds);
    const Dataset scaled =
        options.fit_scaler_on_train ? imputed : standard_scale(imputed, imputed);

    ExperimentReport report;
    report.runs = runs;
    report.base_seed = base_seed;
    for (std::size_t r = 0; r < runs; ++r) {
        const std::uint64_t seed = run_seed(base_seed, r);
        Pcg32 split_rng(seed);
        Split parts;
        try {
            parts = split(scaled, options.split, split_rng);
        } catch (const OpfError& e) {
            throw OpfError("run " + std::to_string(r) + ": " + e.what());
        }
        if (options.fit_scaler_on_train) {
            const auto scaler = StandardScaler::fit(parts.train);
            parts = {scaler.transform(parts.train), scaler.transform(parts.val),
                     scaler.transform(parts.test)};
        }
        const std::vector<int> truth(parts.test.labels().begin(), parts.test.labels().end());

        for (Method m : order) {
            const auto t0 = std::chrono::steady_clock::now();
            Pcg32 rng(derive_seed(seed, 1 + static_cast<std::uint64_t>(m)));
            RunResult rr;
            rr.method = std::string(method_name(m));
            rr.run = r;
            rr.seed = seed;
            try {
                const auto resampler = make_resampler(m, options.distance);
                Dataset resampled;
                if (is_tuned(m)) {
                    const auto& grid = m == Method::Smote ? options.smote_grid : options.kmax_grid;
                    auto tuned = tune_kmax(parts.train, parts.val, resampler, grid, rng, positive,
                                           options.distance);
                    rr.param = tuned.chosen;
                    resampled = std::move(tuned.resampled);
                } else {
                    resampled = resampler(parts.train, parts.val, 0, rng);
                }
                if (options.observer) options.observer(m, r, parts, resampled);
                const auto model = fit(resampled, options.distance);
                rr.f1 = f1_score(truth, predict(model, parts.test, options.distance), positive);
            } catch (const OpfError& e) {
                throw OpfError("run " + std::to_string(r) + ", method " + rr.method + ": " +
                               e.what());
            }
            if (options.record_timing) rr.elapsed = elapsed_since(t0);
            report.results.push_back(std::move(rr));
        }
    }
    summarize(report, options.alpha);
    return report;
}

}  // namespace opfimb

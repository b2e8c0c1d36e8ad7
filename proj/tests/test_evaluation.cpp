#include <doctest.h>

#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "opfimb/evaluation.hpp"
#include "opfimb/metrics.hpp"
#include "oracles.hpp"

using namespace opfimb;

namespace {

class ConstantSource final : public RandomSource {
public:
    std::uint32_t next_u32() override { return 0; }
    std::unique_ptr<RandomSource> spawn(std::uint64_t) const override {
        return std::make_unique<ConstantSource>();
    }
};

std::set<SampleId> ids_of(const Dataset& ds) { return {ds.ids().begin(), ds.ids().end()}; }

}  // namespace

TEST_SUITE("metrics") {
    TEST_CASE("f1 by hand") {
        const std::vector<int> t{1, 1, 1, 0, 0}, p{1, 1, 0, 1, 0};
        CHECK(f1_score(t, p, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
        CHECK(f1_score(t, t, 1) == 1.0);
        const std::vector<int> none{0, 0, 0, 0, 0};
        CHECK(f1_score(t, none, 1) == 0.0);
        CHECK_THROWS_AS(f1_score(t, std::vector<int>{1}, 1), OpfError);
    }

    TEST_CASE("f1 on random confusion matrices") {
        std::mt19937_64 gen(1);
        for (int i = 0; i < 50; ++i) {
            const int tp = gen() % 20, fp = gen() % 20, fn = gen() % 20, tn = gen() % 20 + 1;
            std::vector<int> t, p;
            auto add = [&](int n, int a, int b) {
                for (int k = 0; k < n; ++k) {
                    t.push_back(a);
                    p.push_back(b);
                }
            };
            add(tp, 1, 1);
            add(fp, 0, 1);
            add(fn, 1, 0);
            add(tn, 0, 0);
            const double want = tp == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
            CHECK(f1_score(t, p, 1) == doctest::Approx(want).epsilon(1e-14));
        }
    }

    TEST_CASE("wilcoxon degenerate and obvious cases") {
        const std::vector<double> a{0.1, 0.2, 0.3, 0.4, 0.5};
        auto same = wilcoxon_signed_rank(a, a);
        CHECK(same.p == 1.0);
        CHECK_FALSE(same.significant);

        std::vector<double> x(12), y(12);
        std::mt19937_64 gen(2);
        std::uniform_real_distribution<double> u(0, 1);
        for (int i = 0; i < 12; ++i) {
            y[i] = u(gen);
            x[i] = y[i] + 1.0;
        }
        auto shifted = wilcoxon_signed_rank(x, y);
        CHECK(shifted.significant);
        std::vector<double> d(12);
        for (int i = 0; i < 12; ++i) d[i] = x[i] - y[i];
        CHECK(oracle::wilcoxon_exact(d) < 0.05);
    }

    TEST_CASE("eight hand pairs against 256 sign patterns") {
        const std::vector<double> a{1.83, 0.50, 1.62, 2.48, 1.68, 1.88, 1.55, 3.06};
        const std::vector<double> b{0.878, 0.647, 0.598, 2.05, 1.06, 1.29, 1.06, 3.14};
        auto r = wilcoxon_signed_rank(a, b);
        std::vector<double> d(8);
        for (int i = 0; i < 8; ++i) d[i] = a[i] - b[i];
        CHECK(r.exact);
        CHECK(r.w_plus == 33.0);
        CHECK(r.p == doctest::Approx(oracle::wilcoxon_exact(d)).epsilon(1e-12));
        CHECK(r.p == doctest::Approx(0.0390625).epsilon(1e-12));
    }

    TEST_CASE("exact branch matches the oracle with ties") {
        std::mt19937_64 gen(3);
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 5 + t % 5;
            std::vector<double> a(n), b(n), d;
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = static_cast<double>(gen() % 7) / 4.0;
                b[i] = static_cast<double>(gen() % 7) / 4.0;
                if (a[i] != b[i]) d.push_back(a[i] - b[i]);
            }
            auto r = wilcoxon_signed_rank(a, b);
            if (d.empty()) {
                CHECK(r.p == 1.0);
                continue;
            }
            CHECK(r.exact);
            CHECK(std::abs(r.p - oracle::wilcoxon_exact(d)) <= 1e-12);
        }
    }

    TEST_CASE("normal approximation stays near the exact p at n = 15") {
        std::mt19937_64 gen(4);
        std::normal_distribution<double> z(0.0, 1.0);
        for (int t = 0; t < 20; ++t) {
            std::vector<double> d(15);
            for (auto& v : d) v = z(gen) + 0.3;
            CHECK(std::abs(wilcoxon_normal_p(d) - wilcoxon_exact_p(d)) <= 0.02);
            CHECK(wilcoxon_exact_p(d) == doctest::Approx(oracle::wilcoxon_exact(d)).epsilon(1e-12));
        }
    }
}

TEST_SUITE("evaluation") {
    TEST_CASE("method names round trip") {
        CHECK(all_methods().size() == 14);
        CHECK(all_methods().front() == Method::Original);
        for (auto m : all_methods()) CHECK(parse_method(method_name(m)) == m);
        CHECK_FALSE(parse_method("o2pf-xx").has_value());
        CHECK(method_name(Method::Us2O2pf) == "us2-o2pf");
    }

    TEST_CASE("tuning picks the smaller value on ties and reports unclamped values") {
        std::mt19937_64 gen(5);
        auto train = oracle::gaussian_classes(gen, 60, 6, 2, 2.0);
        auto val = oracle::gaussian_classes(gen, 20, 4, 2, 2.0);
        std::vector<std::size_t> seen;
        Resampler identity = [&](const Dataset& tr, const Dataset&, std::size_t k, RandomSource&) {
            seen.push_back(k);
            return tr;
        };
        Pcg32 rng(1);
        const std::vector<std::size_t> grid{30, 10, 5};
        auto t = tune_kmax(train, val, identity, grid, rng, 1);
        CHECK(t.chosen == 5);
        CHECK(t.f1_per_value.size() == 3);
        CHECK(t.f1_per_value[0] == t.f1_per_value[1]);
        // values above minority size - 1 are clamped before the resampler sees them
        CHECK(seen == std::vector<std::size_t>{5, 5, 5});

        const std::vector<std::size_t> single{20};
        CHECK(tune_kmax(train, val, identity, single, rng, 1).chosen == 20);
    }

    TEST_CASE("SMOTE stays on segments and inside the bounding box") {
        auto two = Dataset::from_rows({{0, 0}, {1, 1}, {2, 0}, {5, 5}, {5, 6}}, {0, 0, 0, 1, 1});
        Pcg32 rng(1);
        auto s = smote_baseline(two, 10, 5, rng);
        CHECK(s.size() == 15);
        for (Index i = 5; i < s.size(); ++i) {
            CHECK(s.at(i, 0) == 5.0);
            CHECK(s.at(i, 1) >= 5.0);
            CHECK(s.at(i, 1) <= 6.0);
            CHECK(s.is_synthetic(i));
        }

        ConstantSource zero;
        auto dup = smote_baseline(two, 1, 1, zero);
        CHECK(dup.at(5, 0) == two.at(3, 0));
        CHECK(dup.at(5, 1) == two.at(3, 1));

        std::mt19937_64 gen(6);
        auto blob = oracle::gaussian_classes(gen, 100, 20, 3, 4.0);
        auto out = smote_baseline(blob, 100, 5, rng);
        std::vector<double> lo(3, oracle::kInf), hi(3, -oracle::kInf);
        for (auto i : blob.indices_of(1))
            for (std::size_t j = 0; j < 3; ++j) {
                lo[j] = std::min(lo[j], blob.at(i, j));
                hi[j] = std::max(hi[j], blob.at(i, j));
            }
        for (Index i = blob.size(); i < out.size(); ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                CHECK(out.at(i, j) >= lo[j]);
                CHECK(out.at(i, j) <= hi[j]);
            }
    }

    TEST_CASE("experiment protocol") {
        std::mt19937_64 gen(7);
        auto ds = oracle::gaussian_classes(gen, 120, 30, 3, 1.5);
        std::map<std::size_t, std::set<SampleId>> train_ids, test_ids;
        bool leaked = false, unpaired = false;
        ExperimentOptions opts;
        opts.kmax_grid = {5, 10};
        opts.smote_grid = {5};
        opts.observer = [&](Method, std::size_t run, const Split& s, const Dataset& resampled) {
            auto tr = ids_of(s.train), te = ids_of(s.test);
            if (train_ids.count(run) && (train_ids[run] != tr || test_ids[run] != te)) unpaired = true;
            train_ids[run] = tr;
            test_ids[run] = te;
            for (Index i = 0; i < resampled.size(); ++i)
                if (te.count(resampled.id(i)) && !resampled.is_synthetic(i)) leaked = true;
        };
        const std::vector<Method> methods{Method::O2pf, Method::OpfUs2, Method::Us3O2pf, Method::Smote};
        auto rep = run_experiment(ds, methods, 3, 42, opts);
        CHECK_FALSE(leaked);
        CHECK_FALSE(unpaired);
        CHECK(rep.results.size() == 15);
        CHECK(rep.summary.size() == 5);
        CHECK(rep.summary.front().method == "original");
        CHECK(rep.tests.size() == 10);
        for (const auto& r : rep.results) {
            CHECK(r.f1 >= 0.0);
            CHECK(r.f1 <= 1.0);
            CHECK(r.seed == run_seed(42, r.run));
        }
        for (const auto& s : rep.summary) {
            auto f = rep.f1_of(s.method);
            REQUIRE(f.size() == 3);
            const double mean = (f[0] + f[1] + f[2]) / 3.0;
            double ss = 0;
            for (double v : f) ss += (v - mean) * (v - mean);
            CHECK(std::abs(s.mean - mean) <= 1e-12);
            CHECK(std::abs(s.std - std::sqrt(ss / 2.0)) <= 1e-12);
        }

        opts.observer = nullptr;
        auto again = run_experiment(ds, methods, 3, 42, opts);
        CHECK(format_report(again) == format_report(rep));
        CHECK(format_results_csv(again) == format_results_csv(rep));
    }

    TEST_CASE("report text round trip") {
        std::mt19937_64 gen(8);
        auto ds = oracle::gaussian_classes(gen, 80, 20, 2, 1.0);
        ExperimentOptions opts;
        opts.kmax_grid = {5};
        const std::vector<Method> methods{Method::O2pfRi};
        auto rep = run_experiment(ds, methods, 2, 1, opts);
        rep.dataset = "toy";
        rep.header = "evaluate --runs 2";
        auto back = parse_report(format_report(rep));
        CHECK(format_report(back) == format_report(rep));
        CHECK(back.results.size() == rep.results.size());
        CHECK(back.summary.front().mean == rep.summary.front().mean);
        CHECK_THROWS_AS(parse_report("garbage"), OpfError);
    }

    TEST_CASE("ORIGINAL smoke run on the bundled Diagnostic I table") {
        auto ds = load_csv(std::filesystem::path(OPFIMB_DATA_DIR) / "wdbc_diagnostic.csv");
        const std::vector<Method> none;
        auto rep = run_experiment(ds, none, 1, 0);
        REQUIRE(rep.results.size() == 1);
        CHECK(rep.results[0].f1 > 0.8);
        CHECK(rep.results[0].f1 <= 1.0);
    }
}

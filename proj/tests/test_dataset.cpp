#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

#include "opfimb/dataset.hpp"
#include "opfimb/random.hpp"
#include "oracles.hpp"

using namespace opfimb;

namespace {

std::set<SampleId> id_set(const Dataset& ds) { return {ds.ids().begin(), ds.ids().end()}; }

}  // namespace

TEST_SUITE("random") {
    TEST_CASE("equal seeds give equal streams, different seeds diverge") {
        Pcg32 a(42), b(42), c(43);
        bool differs = false;
        for (int i = 0; i < 1000; ++i) {
            const auto x = a.next_u32();
            CHECK(x == b.next_u32());
            differs |= x != c.next_u32();
        }
        CHECK(differs);
    }

    TEST_CASE("children are reproducible and follow seed xor mix64(stream)") {
        Pcg32 parent(7);
        auto c1 = parent.spawn(3), c2 = parent.spawn(3), c3 = parent.spawn(4);
        Pcg32 manual(7 ^ mix64(3));
        bool differs = false;
        for (int i = 0; i < 100; ++i) {
            const auto x = c1->next_u32();
            CHECK(x == c2->next_u32());
            CHECK(x == manual.next_u32());
            differs |= x != c3->next_u32();
        }
        CHECK(differs);
        CHECK(derive_seed(7, 3) == (7 ^ mix64(3)));
    }

    TEST_CASE("distributions stay in range") {
        Pcg32 r(1);
        double sum = 0, sq = 0;
        const int n = 20000;
        for (int i = 0; i < n; ++i) {
            const double u = r.uniform();
            CHECK((u >= 0.0 && u < 1.0));
            CHECK(r.below(7) < 7u);
            const double z = r.normal();
            sum += z;
            sq += z * z;
        }
        CHECK(std::abs(sum / n) < 0.05);
        CHECK(std::abs(sq / n - 1.0) < 0.05);
    }

    TEST_CASE("shuffle permutes") {
        Pcg32 r(5);
        std::vector<int> v(50);
        std::iota(v.begin(), v.end(), 0);
        r.shuffle(std::span<int>(v));
        auto s = v;
        std::sort(s.begin(), s.end());
        for (int i = 0; i < 50; ++i) CHECK(s[i] == i);
        CHECK_FALSE(std::is_sorted(v.begin(), v.end()));
    }
}

TEST_SUITE("dataset") {
    TEST_CASE("labels map lexicographically unless a positive label is given") {
        const std::string text = "a,b,cls\n1,2,pos\n3,4,neg\n5,6,pos\n";
        auto ds = parse_csv(text);
        REQUIRE(ds.size() == 3);
        CHECK(ds.dim() == 2);
        CHECK(ds.label(0) == 1);
        CHECK(ds.label(1) == 0);
        CHECK(ds.schema().label_values[0] == "neg");

        CsvOptions o;
        o.positive_label = "neg";
        auto flipped = parse_csv(text, o);
        CHECK(flipped.label(0) == 0);
        CHECK(flipped.label(1) == 1);
    }

    TEST_CASE("label column by name or index") {
        const std::string text = "y,a,b\nx,1,2\nz,3,4\n";
        CsvOptions by_name;
        by_name.label_column = std::string("y");
        auto a = parse_csv(text, by_name);
        CsvOptions by_index;
        by_index.label_column = std::size_t{0};
        auto b = parse_csv(text, by_index);
        CHECK(a == b);
        CHECK(a.at(1, 1) == 4.0);
        CHECK(a.schema().feature_names == std::vector<std::string>{"a", "b"});
    }

    TEST_CASE("bad label sets and cells are rejected") {
        CHECK_THROWS_AS(parse_csv("a,y\n1,p\n2,q\n3,r\n"), OpfError);
        CHECK_THROWS_AS(parse_csv("a,y\n1,p\n2,p\n"), OpfError);
        CHECK_THROWS_AS(parse_csv("a,y\n1,p\nfoo,q\n"), OpfError);
        CHECK_THROWS_AS(load_csv("/nonexistent/file.csv"), OpfError);
    }

    TEST_CASE("missing markers become NaN and impute to the column mean") {
        auto ds = parse_csv("a,b,y\n1,?,p\n,5,q\n3,NaN,p\n");
        CHECK(ds.has_missing());
        auto imp = impute_mean(ds);
        CHECK_FALSE(imp.has_missing());
        CHECK(imp.at(1, 0) == 2.0);
        CHECK(imp.at(0, 1) == 5.0);
        CHECK(impute_mean(imp) == imp);
        CHECK_THROWS_AS(impute_mean(parse_csv("a,b,y\n,1,p\n,2,q\n")), OpfError);
    }

    TEST_CASE("standard scaling") {
        auto ds = Dataset::from_rows({{0, 5}, {2, 5}}, {0, 1});
        auto s = standard_scale(ds, ds);
        CHECK(s.at(0, 0) == -1.0);
        CHECK(s.at(1, 0) == 1.0);
        CHECK(s.at(0, 1) == 0.0);
        CHECK(s.at(1, 1) == 0.0);
        auto wide = Dataset::from_rows({{100, 5}}, {0});
        auto t = standard_scale(ds, wide);
        CHECK(t.at(0, 0) == 99.0);
        // refitting already-scaled data is the identity
        auto again = standard_scale(s, s);
        CHECK(again == s);
    }

    TEST_CASE("csv round trip keeps values and labels") {
        std::mt19937_64 gen(3);
        auto ds = oracle::random_dataset(gen, 40, 4);
        auto back = parse_csv(format_csv(ds, false));
        REQUIRE(back.size() == ds.size());
        for (Index i = 0; i < ds.size(); ++i) {
            CHECK(back.label(i) == ds.label(i));
            for (std::size_t j = 0; j < ds.dim(); ++j) CHECK(back.at(i, j) == ds.at(i, j));
        }
        const auto text = format_csv(ds, true);
        CHECK(text.substr(0, text.find('\n')).ends_with(",synthetic"));

        auto path = std::filesystem::temp_directory_path() / "opfimb_roundtrip.csv";
        write_csv(path, ds, false);
        CHECK(load_csv(path) == back);
        std::filesystem::remove(path);
    }

    TEST_CASE("split sizes for a balanced set of 100") {
        std::vector<std::vector<double>> rows;
        std::vector<int> labels;
        for (int i = 0; i < 100; ++i) {
            rows.push_back({static_cast<double>(i)});
            labels.push_back(i % 2);
        }
        auto ds = Dataset::from_rows(rows, labels);
        Pcg32 r1(9), r2(9);
        auto s = split(ds, {}, r1);
        CHECK(s.train.size() == 70);
        CHECK(s.val.size() == 15);
        CHECK(s.test.size() == 15);
        CHECK(s.train.count(0) == 35);
        CHECK(s.train.count(1) == 35);
        for (const Dataset* p : {&s.val, &s.test}) {
            CHECK(p->count(0) >= 7);
            CHECK(p->count(0) <= 8);
        }
        auto again = split(ds, {}, r2);
        CHECK(again.train == s.train);
        CHECK(again.test == s.test);

        std::set<SampleId> all;
        for (const Dataset* p : {&s.train, &s.val, &s.test}) {
            auto ids = id_set(*p);
            for (auto id : ids) CHECK(all.insert(id).second);
        }
        CHECK(all == id_set(ds));
    }

    TEST_CASE("split keeps rare positives in every partition") {
        // same class sizes as the cervical cancer table: 858 rows, 55 positive
        std::mt19937_64 gen(11);
        auto ds = oracle::gaussian_classes(gen, 858, 55, 3, 1.0);
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            Pcg32 r(seed);
            auto s = split(ds, {}, r);
            CHECK(s.test.count(1) >= 1);
            CHECK(s.val.count(1) >= 1);
            CHECK(s.train.size() + s.val.size() + s.test.size() == 858);
        }
    }

    TEST_CASE("split preconditions") {
        auto tiny = Dataset::from_rows({{0}, {1}, {2}, {3}}, {0, 1, 0, 1});
        Pcg32 r(1);
        CHECK_THROWS_AS(split(tiny, {}, r), OpfError);
        std::vector<std::vector<double>> rows(20, {0.0});
        std::vector<int> labels(20, 0);
        labels[0] = labels[1] = 1;
        CHECK_THROWS_AS(split(Dataset::from_rows(rows, labels), {}, r), OpfError);
    }

    TEST_CASE("concat rejects duplicate ids") {
        auto a = Dataset::from_rows({{0}, {1}}, {0, 1});
        CHECK_THROWS_AS(a.concat(a), OpfError);
        auto b = a.subset(std::vector<Index>{1});
        CHECK(b.size() == 1);
        CHECK(b.id(0) == 1);
    }

    TEST_CASE("bundled Diagnostic I table") {
        auto ds = load_csv(std::filesystem::path(OPFIMB_DATA_DIR) / "wdbc_diagnostic.csv");
        CHECK(ds.size() == 569);
        CHECK(ds.dim() == 30);
        CHECK(ds.count(0) == 357);
        CHECK(ds.count(1) == 212);
    }
}

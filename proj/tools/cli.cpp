#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace opfimb::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ','))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

CsvOptions csv_options(const Config& cfg) {
    CsvOptions o;
    if (!cfg.label_column.empty()) {
        const bool numeric = std::all_of(cfg.label_column.begin(), cfg.label_column.end(),
                                         [](unsigned char c) { return std::isdigit(c); });
        if (numeric)
            o.label_column = static_cast<std::size_t>(std::stoull(cfg.label_column));
        else
            o.label_column = cfg.label_column;
    }
    o.positive_label = cfg.positive_label;
    return o;
}

std::string counts(const Dataset& ds) {
    return std::to_string(ds.count(0)) + "/" + std::to_string(ds.count(1));
}

// Resampling runs in standardized space; real rows go back out with their
// input values and synthetic rows are mapped back through the scaler.
Dataset to_input_units(const Dataset& resampled, const Dataset& raw, const StandardScaler& sc) {
    std::unordered_map<SampleId, Index> row_of;
    for (Index i = 0; i < raw.size(); ++i) row_of.emplace(raw.id(i), i);
    std::vector<double> feats;
    feats.reserve(resampled.size() * resampled.dim());
    for (Index i = 0; i < resampled.size(); ++i) {
        if (!resampled.is_synthetic(i)) {
            auto x = raw.row(row_of.at(resampled.id(i)));
            feats.insert(feats.end(), x.begin(), x.end());
            continue;
        }
        auto x = resampled.row(i);
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double s = sc.scale()[j] > 0.0 ? sc.scale()[j] : 1.0;
            feats.push_back(x[j] * s + sc.mean()[j]);
        }
    }
    return Dataset(resampled.dim(), std::move(feats),
                   {resampled.labels().begin(), resampled.labels().end()},
                   {resampled.ids().begin(), resampled.ids().end()}, resampled.synthetic(),
                   resampled.schema_ptr());
}

std::string summary_table(const ExperimentReport& rep) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rep.summary.size(); ++i)
        if (rep.summary[i].mean > rep.summary[best].mean) best = i;
    auto differs_from_best = [&](const std::string& m) {
        const auto& b = rep.summary[best].method;
        for (const auto& t : rep.tests)
            if ((t.a == m && t.b == b) || (t.a == b && t.b == m)) return t.significant;
        return false;
    };
    std::ostringstream out;
    out << std::left << std::setw(12) << "method" << "  " << std::setw(18) << "f1 (mean+-std)"
        << "  best\n";
    for (const auto& s : rep.summary) {
        std::ostringstream cell;
        cell << std::fixed << std::setprecision(4) << s.mean << "+-" << s.std;
        out << std::left << std::setw(12) << s.method << "  " << std::setw(18) << cell.str()
            << "  " << (differs_from_best(s.method) ? "" : "*") << '\n';
    }
    out << "* = not significantly different from the best mean (Wilcoxon, alpha 0.05)\n";
    return out.str();
}

}  // namespace

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw OpfError("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw OpfError("write failed for '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

int cmd_resample(const Config& cfg, std::ostream& out) {
    if (!cfg.seed) throw UsageError("resample requires --seed");
    if (cfg.methods.size() != 1) throw UsageError("resample takes exactly one --method");
    const Method m = cfg.methods.front();
    const Dataset raw = impute_mean(load_csv(cfg.input, csv_options(cfg)));
    const auto scaler = StandardScaler::fit(raw);
    const Dataset ds = scaler.transform(raw);
    Pcg32 rng(*cfg.seed);
    auto [result, guard] = resample_full(ds, m, cfg.kmax_grid.front(), cfg.val_fraction, rng);
    if (guard) out << "warning: pruning would have emptied a class; kept one sample\n";

    write_atomically(cfg.output, format_csv(to_input_units(result, raw, scaler), true));
    out << "method=" << method_name(m) << " seed=" << *cfg.seed << " before=" << counts(raw)
        << " after=" << counts(result) << " synthetic=" << result.synthetic_count() << '\n';
    return kExitOk;
}

int cmd_evaluate(const Config& cfg, std::ostream& out) {
    const Dataset ds = load_csv(cfg.input, csv_options(cfg));
    ExperimentOptions opts;
    opts.kmax_grid = cfg.kmax_grid;
    opts.fit_scaler_on_train = cfg.fit_scaler_on_train;
    opts.record_timing = cfg.record_timing;
    const double rest = 1.0 - 2.0 * cfg.val_fraction;
    opts.split = SplitSpec{rest, cfg.val_fraction, cfg.val_fraction, 0};
    const std::vector<Method> methods =
        cfg.methods.empty() ? std::vector<Method>(all_methods().begin(), all_methods().end())
                            : cfg.methods;
    auto rep = run_experiment(ds, methods, cfg.runs, cfg.seed.value_or(0), opts);
    rep.dataset = cfg.input.filename().string();
    rep.header = cfg.echo;

    auto prefix = cfg.report;
    if (prefix.empty()) {
        prefix = cfg.input;
        prefix.replace_extension();
        prefix += "_report";
    }
    auto txt = prefix, csv = prefix;
    txt += ".txt";
    csv += ".csv";
    const auto report_text = format_report(rep);
    const auto csv_text = format_results_csv(rep);
    write_atomically(txt, report_text);
    write_atomically(csv, csv_text);
    out << summary_table(rep);
    out << "report: " << txt.string() << '\n';
    return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Optimum-path forest resampling for imbalanced binary datasets", "opfimb"};
    app.require_subcommand(1);
    Config cfg;
    std::string method, methods, grid;
    std::uint64_t seed = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", cfg.input, "input CSV (header row required)")->required();
        sub->add_option("--label-column", cfg.label_column, "label column name or 0-based index (default: last)");
        sub->add_option("--positive-label", cfg.positive_label, "raw label value mapped to class 1");
        sub->add_option("--seed", seed, "random seed");
        sub->add_option("--kmax-grid", grid, "comma list of k_max values (default 5,10,20,30,40,50)");
        sub->add_option("--val-fraction", cfg.val_fraction, "validation fraction (default 0.15)")
            ->check(CLI::Range(0.01, 0.45));
    };
    auto* resample = app.add_subcommand("resample", "resample a CSV file with one method");
    add_common(resample);
    resample->add_option("--output", cfg.output, "output CSV")->required();
    resample->add_option("--method", method, "resampling method")->required();

    auto* evaluate = app.add_subcommand("evaluate", "repeated-holdout evaluation of methods");
    add_common(evaluate);
    evaluate->add_option("--methods,--method", methods, "comma list of methods (default: all)");
    evaluate->add_option("--runs", cfg.runs, "number of runs (default 20)")->check(CLI::PositiveNumber);
    evaluate->add_flag("--fit-scaler-on-train", cfg.fit_scaler_on_train,
                       "fit the scaler on each training partition");
    evaluate->add_flag("--record-timing", cfg.record_timing, "store wall-clock time per run");
    evaluate->add_option("--report", cfg.report, "report path prefix (writes .txt and .csv)");
    evaluate->add_option("--output", cfg.report, "alias of --report");

    auto usage = [&](const std::string& msg) {
        err << "error: " << msg << "\n\n" << app.help();
        return kExitUsage;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        return usage(e.what());
    }

    for (int i = 1; i < argc; ++i) cfg.echo += (i > 1 ? " " : "") + std::string(argv[i]);
    cfg.subcommand = resample->parsed() ? "resample" : "evaluate";
    const auto* sub = resample->parsed() ? resample : evaluate;
    if (sub->count("--seed")) cfg.seed = seed;

    const auto names = split_list(resample->parsed() ? method : methods);
    for (const auto& n : names) {
        auto m = parse_method(n);
        if (!m) return usage("unknown method '" + n + "'");
        cfg.methods.push_back(*m);
    }
    if (!grid.empty()) {
        cfg.kmax_grid.clear();
        for (const auto& g : split_list(grid)) {
            try {
                std::size_t pos = 0;
                const auto v = std::stoull(g, &pos);
                if (pos != g.size() || v == 0) throw std::invalid_argument(g);
                cfg.kmax_grid.push_back(static_cast<std::size_t>(v));
            } catch (const std::exception&) {
                return usage("bad --kmax-grid value '" + g + "'");
            }
        }
        if (cfg.kmax_grid.empty()) return usage("--kmax-grid is empty");
    }

    try {
        if (cfg.subcommand == "resample") {
            if (std::filesystem::exists(cfg.output) &&
                std::filesystem::equivalent(cfg.input, cfg.output))
                return usage("--input and --output must differ");
            return cmd_resample(cfg, out);
        }
        return cmd_evaluate(cfg, out);
    } catch (const UsageError& e) {
        return usage(e.what());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace opfimb::cli

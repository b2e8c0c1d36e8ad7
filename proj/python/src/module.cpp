#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "opfimb/clustering.hpp"
#include "opfimb/evaluation.hpp"
#include "opfimb/metrics.hpp"
#include "opfimb/supervised.hpp"

namespace py = pybind11;
using namespace opfimb;

namespace {

using Matrix = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Labels = py::array_t<int, py::array::c_style | py::array::forcecast>;

Dataset to_dataset(const Matrix& x, const Labels& y) {
    if (x.ndim() != 2) throw py::value_error("X must be a 2-d array");
    if (y.ndim() != 1 || y.shape(0) != x.shape(0))
        throw py::value_error("y must be 1-d with one label per row of X");
    const auto n = static_cast<std::size_t>(x.shape(0));
    const auto dim = static_cast<std::size_t>(x.shape(1));
    std::vector<double> feats(x.data(), x.data() + n * dim);
    std::vector<int> labels(y.data(), y.data() + n);
    for (int l : labels)
        if (l != 0 && l != 1) throw py::value_error("labels must be 0 or 1");
    std::vector<SampleId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<SampleId>(i);
    return Dataset(dim, std::move(feats), std::move(labels), std::move(ids));
}

Matrix features_of(const Dataset& ds) {
    Matrix out({ds.size(), ds.dim()});
    std::copy(ds.features().begin(), ds.features().end(), out.mutable_data());
    return out;
}

template <typename T, typename Range>
py::array_t<T> vector_of(const Range& r) {
    py::array_t<T> out(static_cast<py::ssize_t>(r.size()));
    auto* p = out.mutable_data();
    for (auto v : r) *p++ = static_cast<T>(v);
    return out;
}

// (X, y, synthetic mask) for a resampled dataset.
py::tuple unpack(const Dataset& ds) {
    return py::make_tuple(features_of(ds), vector_of<int>(ds.labels()),
                          vector_of<bool>(ds.synthetic()));
}

Method method_from(const std::string& name) {
    auto m = parse_method(name);
    if (!m) throw py::value_error("unknown method '" + name + "'");
    return *m;
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

UnderPolicy under_from(const std::string& name) {
    for (auto p : {UnderPolicy::US, UnderPolicy::US1, UnderPolicy::US2, UnderPolicy::US3})
        if (to_string(p) == upper(name)) return p;
    throw py::value_error("unknown pruning policy '" + name + "'");
}

OverVariant over_from(const std::string& name) {
    for (auto v : {OverVariant::O2PF, OverVariant::RI, OverVariant::MI, OverVariant::P,
                   OverVariant::WI})
        if (to_string(v) == upper(name)) return v;
    throw py::value_error("unknown oversampling variant '" + name + "'");
}

std::size_t gap(const Dataset& ds) { return ds.majority_count() - ds.minority_count(); }

class Classifier {
public:
    Classifier& fit(const Matrix& x, const Labels& y) {
        auto ds = to_dataset(x, y);
        py::gil_scoped_release release;
        model_ = opfimb::fit(ds);
        return *this;
    }

    py::array_t<int> predict(const Matrix& x) const {
        const auto& m = model();
        if (x.ndim() != 2 || static_cast<std::size_t>(x.shape(1)) != m.nodes.dim())
            throw py::value_error("X does not match the training dimension");
        const auto n = static_cast<std::size_t>(x.shape(0));
        std::vector<int> out(n);
        {
            py::gil_scoped_release release;
            for (std::size_t i = 0; i < n; ++i)
                out[i] = classify(m, {x.data() + i * m.nodes.dim(), m.nodes.dim()}).label;
        }
        return vector_of<int>(out);
    }

    const TrainedOpf& model() const {
        if (!model_) throw std::runtime_error("classifier is not fitted");
        return *model_;
    }

private:
    std::optional<TrainedOpf> model_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Optimum-path forest classification and resampling for imbalanced binary data";
    py::register_exception<OpfError>(m, "OpfError", PyExc_ValueError);

    m.def("methods", [] {
        std::vector<std::string> out;
        for (auto x : all_methods()) out.emplace_back(method_name(x));
        return out;
    });

    m.def(
        "load_csv",
        [](const std::string& path, std::optional<std::string> label_column,
           std::optional<std::string> positive_label, bool impute) {
            CsvOptions o;
            if (label_column) o.label_column = *label_column;
            o.positive_label = positive_label;
            auto ds = load_csv(path, o);
            if (impute) ds = impute_mean(ds);
            return py::make_tuple(features_of(ds), vector_of<int>(ds.labels()),
                                  ds.schema().feature_names,
                                  std::vector<std::string>(ds.schema().label_values.begin(),
                                                           ds.schema().label_values.end()));
        },
        py::arg("path"), py::arg("label_column") = py::none(),
        py::arg("positive_label") = py::none(), py::arg("impute") = true,
        "Returns (X, y, feature_names, label_values).");

    py::class_<Classifier>(m, "OPFClassifier")
        .def(py::init<>())
        .def("fit", &Classifier::fit, py::arg("X"), py::arg("y"))
        .def("predict", &Classifier::predict, py::arg("X"))
        .def_property_readonly("prototypes",
                               [](const Classifier& c) { return vector_of<Index>(c.model().prototypes); })
        .def_property_readonly("costs",
                               [](const Classifier& c) { return vector_of<double>(c.model().cost); });

    m.def(
        "undersample",
        [](const Matrix& x, const Labels& y, const Matrix& xv, const Labels& yv,
           const std::string& policy) {
            auto r = undersample(to_dataset(x, y), to_dataset(xv, yv), under_from(policy));
            return py::make_tuple(features_of(r.data), vector_of<int>(r.data.labels()),
                                  vector_of<Index>(r.removed), r.guard_fired);
        },
        py::arg("X"), py::arg("y"), py::arg("X_val"), py::arg("y_val"), py::arg("policy") = "us",
        "Returns (X, y, removed_rows, guard_fired).");

    m.def(
        "oversample",
        [](const Matrix& x, const Labels& y, const std::string& variant, std::size_t k_max,
           std::uint64_t seed, std::optional<std::size_t> n_synthetic) {
            auto ds = to_dataset(x, y);
            Pcg32 rng(seed);
            const auto n_s = n_synthetic.value_or(gap(ds));
            if (n_s == 0) return unpack(ds);
            return unpack(oversample(ds, n_s, {over_from(variant), k_max}, rng).data);
        },
        py::arg("X"), py::arg("y"), py::arg("variant") = "o2pf", py::arg("k_max") = 5,
        py::arg("seed") = 0, py::arg("n_synthetic") = py::none(),
        "Returns (X, y, synthetic); synthetic rows follow the input rows.");

    m.def(
        "hybrid",
        [](const Matrix& x, const Labels& y, const Matrix& xv, const Labels& yv,
           const std::string& policy, std::size_t k_max, std::uint64_t seed) {
            Pcg32 rng(seed);
            auto r = hybrid_resample(to_dataset(x, y), to_dataset(xv, yv),
                                     {under_from(policy), {OverVariant::O2PF, k_max}}, rng);
            return unpack(r.data);
        },
        py::arg("X"), py::arg("y"), py::arg("X_val"), py::arg("y_val"),
        py::arg("policy") = "us1", py::arg("k_max") = 5, py::arg("seed") = 0);

    m.def(
        "resample",
        [](const Matrix& x, const Labels& y, const std::string& method, std::size_t param,
           std::uint64_t seed, double val_fraction) {
            auto ds = to_dataset(x, y);
            Pcg32 rng(seed);
            auto r = resample_full(ds, method_from(method), param, val_fraction, rng);
            return unpack(r.data);
        },
        py::arg("X"), py::arg("y"), py::arg("method"), py::arg("param") = 5, py::arg("seed") = 0,
        py::arg("val_fraction") = 0.15,
        "Resamples a whole dataset with one named method. Returns (X, y, synthetic).");

    m.def(
        "best_k",
        [](const Matrix& x, std::size_t k_max) {
            std::vector<int> zeros(static_cast<std::size_t>(x.ndim() == 2 ? x.shape(0) : 0), 0);
            auto ds = to_dataset(x, Labels(static_cast<py::ssize_t>(zeros.size()), zeros.data()));
            auto b = best_k(ds, k_max);
            return py::make_tuple(b.k, b.cut, vector_of<int>(b.forest.cluster_label));
        },
        py::arg("X"), py::arg("k_max"), "Returns (k, normalized_cut, cluster_labels).");

    m.def(
        "f1_score",
        [](const Labels& t, const Labels& p, int positive) {
            return f1_score({t.data(), static_cast<std::size_t>(t.size())},
                            {p.data(), static_cast<std::size_t>(p.size())}, positive);
        },
        py::arg("y_true"), py::arg("y_pred"), py::arg("positive") = 1);

    m.def(
        "wilcoxon",
        [](std::vector<double> a, std::vector<double> b, double alpha) {
            if (a.size() != b.size()) throw py::value_error("samples must be paired");
            auto r = wilcoxon_signed_rank(a, b, alpha);
            py::dict out;
            out["p"] = r.p;
            out["significant"] = r.significant;
            out["n"] = r.n;
            out["w_plus"] = r.w_plus;
            out["exact"] = r.exact;
            return out;
        },
        py::arg("a"), py::arg("b"), py::arg("alpha") = 0.05);

    m.def(
        "evaluate",
        [](const Matrix& x, const Labels& y, std::vector<std::string> methods, std::size_t runs,
           std::uint64_t seed, std::optional<std::vector<std::size_t>> kmax_grid) {
            auto ds = to_dataset(x, y);
            std::vector<Method> ms;
            for (const auto& name : methods) ms.push_back(method_from(name));
            ExperimentOptions opts;
            if (kmax_grid) opts.kmax_grid = *kmax_grid;
            ExperimentReport rep;
            {
                py::gil_scoped_release release;
                rep = run_experiment(ds, ms, runs, seed, opts);
            }
            py::dict summary;
            for (const auto& s : rep.summary) summary[py::str(s.method)] = py::make_tuple(s.mean, s.std);
            py::dict f1;
            for (const auto& s : rep.summary) f1[py::str(s.method)] = rep.f1_of(s.method);
            py::dict out;
            out["summary"] = summary;
            out["f1"] = f1;
            out["report"] = format_report(rep);
            return out;
        },
        py::arg("X"), py::arg("y"), py::arg("methods"), py::arg("runs") = 20, py::arg("seed") = 0,
        py::arg("kmax_grid") = py::none(),
        "Repeated stratified holdout. Returns {'summary': {method: (mean, std)}, 'f1': ..., "
        "'report': text}.");
}

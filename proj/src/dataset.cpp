#include "opfimb/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_set>

namespace opfimb {

namespace {

std::shared_ptr<const Schema> default_schema(std::size_t dim) {
    auto s = std::make_shared<Schema>();
    for (std::size_t j = 0; j < dim; ++j) s->feature_names.push_back("f" + std::to_string(j));
    return s;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool is_missing_token(const std::string& cell) {
    if (cell.empty()) return true;
    const auto l = lower(cell);
    return l == "nan" || l == "?";
}

// Splits one CSV record; double quotes group and "" escapes a quote.
std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

// Largest-remainder allocation of `total` items across classes in proportion
// to `counts`; ties go to the lower class index. Each class with at least
// `min_left + 1` members gets at least one item when total allows.
std::array<std::size_t, 2> allocate_stratified(std::array<std::size_t, 2> counts,
                                               std::size_t total) {
    const std::size_t n = counts[0] + counts[1];
    std::array<std::size_t, 2> out{0, 0};
    if (n == 0 || total == 0) return out;
    std::array<double, 2> frac{};
    std::size_t assigned = 0;
    for (int c = 0; c < 2; ++c) {
        const double exact = static_cast<double>(counts[c]) * static_cast<double>(total) /
                             static_cast<double>(n);
        out[c] = static_cast<std::size_t>(std::floor(exact));
        frac[c] = exact - static_cast<double>(out[c]);
        assigned += out[c];
    }
    while (assigned < total) {
        int pick = frac[0] >= frac[1] ? 0 : 1;
        if (out[pick] >= counts[pick]) pick = 1 - pick;
        ++out[pick];
        frac[pick] = -1.0;
        ++assigned;
    }
    for (int c = 0; c < 2; ++c) {
        const int other = 1 - c;
        if (out[c] == 0 && counts[c] > 0 && out[other] > 1) {
            ++out[c];
            --out[other];
        }
    }
    return out;
}

}  // namespace

Dataset::Dataset(std::size_t dim, std::vector<double> features, std::vector<int> labels,
                 std::vector<SampleId> ids, std::vector<bool> synthetic,
                 std::shared_ptr<const Schema> schema)
    : dim_(dim),
      features_(std::move(features)),
      labels_(std::move(labels)),
      ids_(std::move(ids)),
      synthetic_(std::move(synthetic)),
      schema_(std::move(schema)) {
    if (dim_ == 0) throw OpfError("dataset needs at least one feature column");
    if (features_.size() != labels_.size() * dim_)
        throw OpfError("feature matrix size does not match label count");
    if (ids_.size() != labels_.size()) throw OpfError("id count does not match label count");
    if (synthetic_.empty()) synthetic_.assign(labels_.size(), false);
    if (synthetic_.size() != labels_.size())
        throw OpfError("synthetic flag count does not match label count");
    for (int l : labels_)
        if (l != 0 && l != 1) throw OpfError("labels must be 0 or 1");
    std::unordered_set<SampleId> seen(ids_.begin(), ids_.end());
    if (seen.size() != ids_.size()) throw OpfError("sample ids must be unique");
    if (!schema_) schema_ = default_schema(dim_);
    if (schema_->feature_names.size() != dim_)
        throw OpfError("schema column count does not match dimension");
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows,
                           const std::vector<int>& labels) {
    if (rows.empty()) throw OpfError("no rows");
    const std::size_t d = rows.front().size();
    std::vector<double> feats;
    feats.reserve(rows.size() * d);
    for (const auto& r : rows) {
        if (r.size() != d) throw OpfError("ragged rows");
        feats.insert(feats.end(), r.begin(), r.end());
    }
    std::vector<SampleId> ids(rows.size());
    std::iota(ids.begin(), ids.end(), SampleId{0});
    return Dataset(d, std::move(feats), labels, std::move(ids));
}

std::size_t Dataset::count(int label) const {
    return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), label));
}

int Dataset::minority_label() const { return count(1) <= count(0) ? 1 : 0; }

std::size_t Dataset::synthetic_count() const {
    return static_cast<std::size_t>(std::count(synthetic_.begin(), synthetic_.end(), true));
}

bool Dataset::has_missing() const {
    return std::any_of(features_.begin(), features_.end(), [](double v) { return std::isnan(v); });
}

SampleId Dataset::max_id() const {
    if (ids_.empty()) return -1;
    return *std::max_element(ids_.begin(), ids_.end());
}

std::vector<Index> Dataset::indices_of(int label) const {
    std::vector<Index> out;
    for (Index i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label) out.push_back(i);
    return out;
}

Dataset Dataset::subset(std::span<const Index> rows) const {
    std::vector<double> feats;
    feats.reserve(rows.size() * dim_);
    std::vector<int> labels;
    std::vector<SampleId> ids;
    std::vector<bool> synth;
    labels.reserve(rows.size());
    ids.reserve(rows.size());
    synth.reserve(rows.size());
    for (Index r : rows) {
        auto x = row(r);
        feats.insert(feats.end(), x.begin(), x.end());
        labels.push_back(labels_[r]);
        ids.push_back(ids_[r]);
        synth.push_back(synthetic_[r]);
    }
    Dataset out;
    out.dim_ = dim_;
    out.features_ = std::move(feats);
    out.labels_ = std::move(labels);
    out.ids_ = std::move(ids);
    out.synthetic_ = std::move(synth);
    out.schema_ = schema_;
    return out;
}

Dataset Dataset::concat(const Dataset& extra) const {
    if (extra.dim_ != dim_) throw OpfError("cannot concatenate datasets of different dimension");
    std::unordered_set<SampleId> seen(ids_.begin(), ids_.end());
    for (SampleId id : extra.ids_)
        if (!seen.insert(id).second) throw OpfError("duplicate sample id " + std::to_string(id));
    Dataset out = *this;
    out.features_.insert(out.features_.end(), extra.features_.begin(), extra.features_.end());
    out.labels_.insert(out.labels_.end(), extra.labels_.begin(), extra.labels_.end());
    out.ids_.insert(out.ids_.end(), extra.ids_.begin(), extra.ids_.end());
    out.synthetic_.insert(out.synthetic_.end(), extra.synthetic_.begin(), extra.synthetic_.end());
    return out;
}

void Dataset::push_back(std::span<const double> x, int label, SampleId id, bool synthetic) {
    if (x.size() != dim_) throw OpfError("row dimension mismatch");
    if (label != 0 && label != 1) throw OpfError("labels must be 0 or 1");
    if (std::find(ids_.begin(), ids_.end(), id) != ids_.end())
        throw OpfError("duplicate sample id " + std::to_string(id));
    features_.insert(features_.end(), x.begin(), x.end());
    labels_.push_back(label);
    ids_.push_back(id);
    synthetic_.push_back(synthetic);
}

bool Dataset::operator==(const Dataset& other) const {
    if (dim_ != other.dim_ || labels_ != other.labels_ || ids_ != other.ids_ ||
        synthetic_ != other.synthetic_ || features_.size() != other.features_.size())
        return false;
    // bitwise comparison so that NaN cells compare equal to themselves
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const double a = features_[i], b = other.features_[i];
        if (!(a == b) && !(std::isnan(a) && std::isnan(b))) return false;
    }
    return true;
}

Dataset parse_csv(const std::string& text, const CsvOptions& options) {
    std::istringstream in(text);
    std::string line;
    std::vector<std::vector<std::string>> records;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
            first = false;
        }
        if (trim(line).empty()) continue;
        records.push_back(split_record(line));
    }
    if (records.empty()) throw OpfError("csv has no header row");
    const auto header = records.front();
    const std::size_t ncols = header.size();
    if (ncols < 2) throw OpfError("csv needs at least one feature column and a label column");

    std::size_t label_col = ncols - 1;
    if (const auto* name = std::get_if<std::string>(&options.label_column)) {
        auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) throw OpfError("label column '" + *name + "' not found");
        label_col = static_cast<std::size_t>(it - header.begin());
    } else if (const auto* idx = std::get_if<std::size_t>(&options.label_column)) {
        if (*idx >= ncols) throw OpfError("label column index out of range");
        label_col = *idx;
    }

    std::set<std::string> raw_labels;
    for (std::size_t r = 1; r < records.size(); ++r) {
        if (records[r].size() != ncols)
            throw OpfError("row " + std::to_string(r) + " has " + std::to_string(records[r].size()) +
                           " cells, header has " + std::to_string(ncols));
        raw_labels.insert(records[r][label_col]);
    }
    if (records.size() < 2) throw OpfError("csv has no data rows");
    if (raw_labels.size() < 2) throw OpfError("label column has fewer than 2 distinct values");
    if (raw_labels.size() > 2) throw OpfError("label column has more than 2 distinct values");

    auto schema = std::make_shared<Schema>();
    schema->label_name = header[label_col];
    schema->label_values = {*raw_labels.begin(), *std::next(raw_labels.begin())};
    if (options.positive_label) {
        if (!raw_labels.contains(*options.positive_label))
            throw OpfError("positive label '" + *options.positive_label + "' not present");
        if (schema->label_values[0] == *options.positive_label)
            std::swap(schema->label_values[0], schema->label_values[1]);
    }
    for (std::size_t c = 0; c < ncols; ++c)
        if (c != label_col) schema->feature_names.push_back(header[c]);

    const std::size_t d = ncols - 1;
    std::vector<double> feats;
    std::vector<int> labels;
    feats.reserve((records.size() - 1) * d);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        for (std::size_t c = 0; c < ncols; ++c) {
            if (c == label_col) continue;
            const auto& cell = rec[c];
            if (is_missing_token(cell)) {
                feats.push_back(std::numeric_limits<double>::quiet_NaN());
                continue;
            }
            double v = 0.0;
            const char* b = cell.data();
            const char* e = b + cell.size();
            if (*b == '+') ++b;
            auto res = std::from_chars(b, e, v);
            if (res.ec != std::errc() || res.ptr != e)
                throw OpfError("non-numeric cell '" + cell + "' at row " + std::to_string(r) +
                               ", column '" + header[c] + "'");
            feats.push_back(v);
        }
        labels.push_back(rec[label_col] == schema->label_values[1] ? 1 : 0);
    }
    std::vector<SampleId> ids(labels.size());
    std::iota(ids.begin(), ids.end(), SampleId{0});
    return Dataset(d, std::move(feats), std::move(labels), std::move(ids), {}, std::move(schema));
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw OpfError("cannot read '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), options);
}

std::string format_csv(const Dataset& ds, bool synthetic_column) {
    std::string out;
    const auto& s = ds.schema();
    for (const auto& name : s.feature_names) out += csv_escape(name) + ',';
    out += csv_escape(s.label_name);
    if (synthetic_column) out += ",synthetic";
    out += '\n';
    for (Index i = 0; i < ds.size(); ++i) {
        for (double v : ds.row(i)) out += format_double(v) + ',';
        out += csv_escape(s.label_values[static_cast<std::size_t>(ds.label(i))]);
        if (synthetic_column) out += ds.is_synthetic(i) ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

void write_csv(const std::filesystem::path& path, const Dataset& ds, bool synthetic_column) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw OpfError("cannot write '" + path.string() + "'");
    out << format_csv(ds, synthetic_column);
    if (!out) throw OpfError("write failed for '" + path.string() + "'");
}

Dataset impute_mean(const Dataset& ds) {
    const std::size_t d = ds.dim();
    std::vector<double> sum(d, 0.0);
    std::vector<std::size_t> seen(d, 0);
    for (Index i = 0; i < ds.size(); ++i) {
        auto x = ds.row(i);
        for (std::size_t j = 0; j < d; ++j) {
            if (!std::isnan(x[j])) {
                sum[j] += x[j];
                ++seen[j];
            }
        }
    }
    std::vector<double> feats(ds.features().begin(), ds.features().end());
    for (std::size_t j = 0; j < d; ++j) {
        if (seen[j] == 0)
            throw OpfError("column '" + ds.schema().feature_names[j] + "' has no observed values");
        const double mean = sum[j] / static_cast<double>(seen[j]);
        for (Index i = 0; i < ds.size(); ++i)
            if (std::isnan(feats[i * d + j])) feats[i * d + j] = mean;
    }
    return Dataset(d, std::move(feats), {ds.labels().begin(), ds.labels().end()},
                   {ds.ids().begin(), ds.ids().end()}, ds.synthetic(), ds.schema_ptr());
}

StandardScaler StandardScaler::fit(const Dataset& ds) {
    if (ds.size() < 2) throw OpfError("scaler needs at least 2 samples");
    if (ds.has_missing()) throw OpfError("scaler cannot fit on missing values; impute first");
    const std::size_t d = ds.dim();
    const double n = static_cast<double>(ds.size());
    StandardScaler s;
    s.mean_.assign(d, 0.0);
    s.scale_.assign(d, 0.0);
    for (Index i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) s.mean_[j] += ds.at(i, j);
    for (auto& m : s.mean_) m /= n;
    for (Index i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double c = ds.at(i, j) - s.mean_[j];
            s.scale_[j] += c * c;
        }
    for (auto& v : s.scale_) v = std::sqrt(v / n);
    return s;
}

Dataset StandardScaler::transform(const Dataset& ds) const {
    if (ds.dim() != mean_.size()) throw OpfError("scaler dimension mismatch");
    const std::size_t d = ds.dim();
    std::vector<double> feats(ds.features().begin(), ds.features().end());
    for (Index i = 0; i < ds.size(); ++i)
        for (std::size_t j = 0; j < d; ++j) {
            double& v = feats[i * d + j];
            v -= mean_[j];
            if (scale_[j] > 0.0) v /= scale_[j];
        }
    return Dataset(d, std::move(feats), {ds.labels().begin(), ds.labels().end()},
                   {ds.ids().begin(), ds.ids().end()}, ds.synthetic(), ds.schema_ptr());
}

Dataset standard_scale(const Dataset& fit_on, const Dataset& apply_to) {
    return StandardScaler::fit(fit_on).transform(apply_to);
}

Split split(const Dataset& ds, const SplitSpec& spec, RandomSource& rng) {
    const double total = spec.train_fraction + spec.val_fraction + spec.test_fraction;
    if (std::abs(total - 1.0) > 1e-9) throw OpfError("split fractions must sum to 1");
    if (spec.train_fraction <= 0 || spec.val_fraction <= 0 || spec.test_fraction <= 0)
        throw OpfError("split fractions must be positive");
    if (ds.size() < 10) throw OpfError("split needs at least 10 samples");
    const std::array<std::size_t, 2> counts{ds.count(0), ds.count(1)};
    for (int c = 0; c < 2; ++c)
        if (counts[c] < 3)
            throw OpfError("class " + std::to_string(c) +
                           " has fewer than 3 samples; cannot populate all partitions");

    const double n = static_cast<double>(ds.size());
    const auto n_val = static_cast<std::size_t>(std::round(n * spec.val_fraction));
    const auto n_test = static_cast<std::size_t>(std::round(n * spec.test_fraction));
    const auto val_c = allocate_stratified(counts, n_val);
    const auto test_c = allocate_stratified({counts[0] - val_c[0], counts[1] - val_c[1]}, n_test);

    std::vector<Index> tr, va, te;
    for (int c = 0; c < 2; ++c) {
        auto idx = ds.indices_of(c);
        rng.shuffle(std::span<Index>(idx));
        if (val_c[c] == 0 || test_c[c] == 0 || val_c[c] + test_c[c] >= idx.size())
            throw OpfError("class " + std::to_string(c) + " is too small for a stratified split");
        va.insert(va.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(val_c[c]));
        te.insert(te.end(), idx.begin() + static_cast<std::ptrdiff_t>(val_c[c]),
                  idx.begin() + static_cast<std::ptrdiff_t>(val_c[c] + test_c[c]));
        tr.insert(tr.end(), idx.begin() + static_cast<std::ptrdiff_t>(val_c[c] + test_c[c]),
                  idx.end());
    }
    std::sort(tr.begin(), tr.end());
    std::sort(va.begin(), va.end());
    std::sort(te.begin(), te.end());
    return {ds.subset(tr), ds.subset(va), ds.subset(te)};
}

Split split(const Dataset& ds, const SplitSpec& spec) {
    Pcg32 rng(spec.seed);
    return split(ds, spec, rng);
}

std::pair<Dataset, Dataset> holdout(const Dataset& ds, double fraction, RandomSource& rng) {
    if (fraction <= 0.0 || fraction >= 1.0) throw OpfError("holdout fraction must be in (0, 1)");
    const std::array<std::size_t, 2> counts{ds.count(0), ds.count(1)};
    for (int c = 0; c < 2; ++c)
        if (counts[c] < 2)
            throw OpfError("class " + std::to_string(c) + " has fewer than 2 samples");
    const auto n_held =
        static_cast<std::size_t>(std::round(static_cast<double>(ds.size()) * fraction));
    const auto held_c = allocate_stratified(counts, n_held);
    std::vector<Index> kept, held;
    for (int c = 0; c < 2; ++c) {
        auto idx = ds.indices_of(c);
        rng.shuffle(std::span<Index>(idx));
        if (held_c[c] == 0 || held_c[c] >= idx.size())
            throw OpfError("class " + std::to_string(c) + " is too small for a stratified holdout");
        held.insert(held.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(held_c[c]));
        kept.insert(kept.end(), idx.begin() + static_cast<std::ptrdiff_t>(held_c[c]), idx.end());
    }
    std::sort(kept.begin(), kept.end());
    std::sort(held.begin(), held.end());
    return {ds.subset(kept), ds.subset(held)};
}

}  // namespace opfimb

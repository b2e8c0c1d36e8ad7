#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "opfimb/random.hpp"

namespace opfimb {

using Index = std::size_t;
using SampleId = std::int64_t;

/// Raised for every contract violation reported by the library.
class OpfError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Column names and the raw label strings behind labels 0 and 1.
struct Schema {
    std::vector<std::string> feature_names;
    std::string label_name = "label";
    std::array<std::string, 2> label_values{"0", "1"};
};

/// Row-major feature matrix with binary labels and stable per-sample ids.
///
/// Missing cells are stored as quiet NaN until impute_mean() runs. Rows
/// produced by a resampler carry the synthetic flag; everything else is real.
class Dataset {
public:
    Dataset() = default;
    Dataset(std::size_t dim, std::vector<double> features, std::vector<int> labels,
            std::vector<SampleId> ids, std::vector<bool> synthetic = {},
            std::shared_ptr<const Schema> schema = nullptr);

    /// Dataset with ids 0..N-1, taking the dimension from the first row.
    static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                             const std::vector<int>& labels);

    std::size_t size() const { return labels_.size(); }
    std::size_t dim() const { return dim_; }
    bool empty() const { return labels_.empty(); }

    std::span<const double> row(Index i) const {
        return {features_.data() + i * dim_, dim_};
    }
    double at(Index i, std::size_t j) const { return features_[i * dim_ + j]; }
    int label(Index i) const { return labels_[i]; }
    SampleId id(Index i) const { return ids_[i]; }
    bool is_synthetic(Index i) const { return synthetic_[i]; }

    std::span<const double> features() const { return features_; }
    std::span<const int> labels() const { return labels_; }
    std::span<const SampleId> ids() const { return ids_; }
    const std::vector<bool>& synthetic() const { return synthetic_; }
    const Schema& schema() const { return *schema_; }
    std::shared_ptr<const Schema> schema_ptr() const { return schema_; }

    std::size_t count(int label) const;
    /// Label with fewer samples; label 1 on a tie.
    int minority_label() const;
    int majority_label() const { return 1 - minority_label(); }
    std::size_t minority_count() const { return count(minority_label()); }
    std::size_t majority_count() const { return count(majority_label()); }
    std::size_t synthetic_count() const;
    bool has_missing() const;
    /// Largest id present, or -1 when empty.
    SampleId max_id() const;
    std::vector<Index> indices_of(int label) const;

    /// Rows at `rows`, in the given order.
    Dataset subset(std::span<const Index> rows) const;
    /// This dataset with `extra`'s rows appended (schemas must agree on dim).
    Dataset concat(const Dataset& extra) const;

    void push_back(std::span<const double> row, int label, SampleId id, bool synthetic);

    bool operator==(const Dataset& other) const;

private:
    std::size_t dim_ = 0;
    std::vector<double> features_;
    std::vector<int> labels_;
    std::vector<SampleId> ids_;
    std::vector<bool> synthetic_;
    std::shared_ptr<const Schema> schema_;
};

/// Which column carries the class: a header name, a 0-based index, or the last column.
using LabelColumn = std::variant<std::monostate, std::string, std::size_t>;

struct CsvOptions {
    LabelColumn label_column{};
    /// Raw label value to map to 1. By default the lexicographically smaller value is 0.
    std::optional<std::string> positive_label;
};

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});
Dataset parse_csv(const std::string& text, const CsvOptions& options = {});

/// Header plus one row per sample; label last, then an optional "synthetic" 0/1 column.
std::string format_csv(const Dataset& ds, bool synthetic_column);
void write_csv(const std::filesystem::path& path, const Dataset& ds, bool synthetic_column);

/// Replaces each missing cell by the mean of the observed values in its column.
Dataset impute_mean(const Dataset& ds);

class StandardScaler {
public:
    /// Population mean and standard deviation per column; needs >= 2 rows.
    static StandardScaler fit(const Dataset& ds);
    /// (x - mean) / sd per column; zero-variance columns are only centered.
    Dataset transform(const Dataset& ds) const;

    std::span<const double> mean() const { return mean_; }
    std::span<const double> scale() const { return scale_; }

private:
    std::vector<double> mean_;
    std::vector<double> scale_;
};

Dataset standard_scale(const Dataset& fit_on, const Dataset& apply_to);

struct SplitSpec {
    double train_fraction = 0.70;
    double val_fraction = 0.15;
    double test_fraction = 0.15;
    std::uint64_t seed = 0;
};

struct Split {
    Dataset train;
    Dataset val;
    Dataset test;
};

/// Stratified three-way split. Partition sizes are round(N * fraction) for
/// validation and test, the remainder goes to training; every partition holds
/// both classes. Rows keep their original relative order inside a partition.
Split split(const Dataset& ds, const SplitSpec& spec, RandomSource& rng);
Split split(const Dataset& ds, const SplitSpec& spec);

/// Stratified two-way split: (kept, held_out) with round(N * fraction) held out.
std::pair<Dataset, Dataset> holdout(const Dataset& ds, double fraction, RandomSource& rng);

}  // namespace opfimb

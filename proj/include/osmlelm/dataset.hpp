#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osmlelm/labels.hpp"
#include "osmlelm/matrix.hpp"

namespace osmlelm {

struct LabeledDataset {
    Matrix features;
    LabelMatrix labels;
    std::vector<std::string> feature_names;
    std::vector<std::string> label_names;
    std::string domain_tag;

    std::size_t rows() const noexcept { return features.rows(); }
    std::size_t feature_count() const noexcept { return features.cols(); }
    std::size_t label_count() const noexcept { return labels.labels(); }

    LabeledDataset select_rows(std::span<const std::size_t> indices) const;
    LabeledDataset row_block(std::size_t first, std::size_t count) const;
};

/// Dense CSV: D feature columns followed by M label columns (0/1), comma
/// separated, optional single header line. Errors carry the 1-based line.
LabeledDataset read_csv(std::istream& in, std::size_t label_count, bool has_header);
LabeledDataset load_csv(const std::filesystem::path& path, std::size_t label_count,
                        bool has_header);
void write_csv(std::ostream& out, const LabeledDataset& ds);
void save_csv(const std::filesystem::path& path, const LabeledDataset& ds);

/// Sparse lines: `<l1,l2,...> <idx>:<val> ...`, label and feature indices
/// 1-based, `#` starts a comment. A line starting with whitespace has no
/// labels. Unlisted features and labels are zero.
LabeledDataset read_sparse(std::istream& in, std::size_t feature_count,
                           std::size_t label_count);
LabeledDataset load_sparse(const std::filesystem::path& path, std::size_t feature_count,
                           std::size_t label_count);
/// Values are written at 17 significant digits so a reload is exact.
void write_sparse(std::ostream& out, const LabeledDataset& ds);
void save_sparse(const std::filesystem::path& path, const LabeledDataset& ds);

/// Per-feature affine map taking the fitted [min, max] onto [-1, 1]. Constant
/// features map to 0. Values outside the fitted range are not clamped.
struct Normalizer {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t feature_count() const noexcept { return lo.size(); }
    double apply(std::size_t feature, double value) const noexcept;

    friend bool operator==(const Normalizer&, const Normalizer&) = default;
};

/// Fits on rows [first, first + count).
Normalizer fit_normalizer(const Matrix& features, std::size_t first, std::size_t count);
Normalizer fit_normalizer(const LabeledDataset& ds, std::size_t first, std::size_t count);
Normalizer fit_normalizer(const LabeledDataset& ds);

Matrix apply_normalizer(const Normalizer& norm, const Matrix& features);
LabeledDataset apply_normalizer(const Normalizer& norm, const LabeledDataset& ds);

/// Seeded Fisher-Yates permutation of [0, n).
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

struct Fold {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
};

/// Seeded random partition of [0, n) into k test folds whose sizes differ by
/// at most one; the first n % k folds get the extra element.
std::vector<Fold> kfold(std::size_t n, std::size_t k, std::uint64_t seed);
std::vector<Fold> kfold(const LabeledDataset& ds, std::size_t k, std::uint64_t seed);

/// One line per fold, space-separated 0-based test indices.
std::vector<Fold> read_fold_file(const std::filesystem::path& path, std::size_t n);
void write_fold_file(const std::filesystem::path& path, std::span<const Fold> folds);

struct StreamPlan {
    std::size_t init_block_size = 1;
    std::size_t block_size = 1;
    std::optional<std::uint64_t> shuffle_seed;
};

/// Throws ConfigError unless 1 <= init_block_size <= n and block_size >= 1.
void validate_plan(const StreamPlan& plan, std::size_t n);

/// Number of blocks including the initial one.
std::size_t block_count(const StreamPlan& plan, std::size_t n);

/// Initial block first, then stream blocks of block_size rows; the last one
/// holds the remainder. Concatenating the items gives the dataset back, in
/// shuffled order when shuffle_seed is set.
std::vector<LabeledDataset> stream_blocks(const LabeledDataset& ds, const StreamPlan& plan);

}  // namespace osmlelm

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "osmlelm/matrix.hpp"

namespace osmlelm {

/// N x M binary relevance matrix; entry (i, l) is 1 when label l applies to
/// sample i.
class LabelMatrix {
public:
    LabelMatrix() = default;
    LabelMatrix(std::size_t rows, std::size_t labels);
    /// Throws DataError unless every entry is 0 or 1.
    LabelMatrix(std::size_t rows, std::size_t labels, std::vector<std::uint8_t> data);
    LabelMatrix(std::initializer_list<std::initializer_list<int>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t labels() const noexcept { return labels_; }

    std::uint8_t operator()(std::size_t r, std::size_t l) const noexcept { return data_[r * labels_ + l]; }
    void set(std::size_t r, std::size_t l, bool on) noexcept { data_[r * labels_ + l] = on ? 1 : 0; }

    std::span<const std::uint8_t> row(std::size_t r) const noexcept { return {data_.data() + r * labels_, labels_}; }
    std::span<const std::uint8_t> values() const noexcept { return data_; }

    /// Number of relevant labels in row r.
    std::size_t row_count(std::size_t r) const noexcept;

    LabelMatrix select_rows(std::span<const std::size_t> indices) const;
    LabelMatrix complement() const;

    friend bool operator==(const LabelMatrix&, const LabelMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t labels_ = 0;
    std::vector<std::uint8_t> data_;
};

/// 0 -> -1, 1 -> +1.
Matrix to_bipolar(const LabelMatrix& y);
/// Entries > 0 -> 1, otherwise 0.
LabelMatrix from_bipolar(const Matrix& y);

/// Label l is predicted for sample i iff raw(i, l) > threshold.
LabelMatrix decode(const Matrix& raw, double threshold);

struct ThresholdCalibration {
    double threshold = 0.0;
    double training_hamming = 0.0;
    std::size_t candidates_evaluated = 0;
};

/// Picks the global decoding threshold minimizing hamming loss on (raw, truth).
///
/// Candidates are the midpoints between consecutive distinct raw values plus
/// min - 1 and max + 1. Ties go to the candidate nearest zero, then to the
/// smaller one.
ThresholdCalibration calibrate_threshold(const Matrix& raw, const LabelMatrix& truth);

}  // namespace osmlelm

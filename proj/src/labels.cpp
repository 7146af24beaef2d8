#include "osmlelm/labels.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "osmlelm/error.hpp"

namespace osmlelm {

LabelMatrix::LabelMatrix(std::size_t rows, std::size_t labels)
    : rows_(rows), labels_(labels), data_(rows * labels, 0) {}

LabelMatrix::LabelMatrix(std::size_t rows, std::size_t labels, std::vector<std::uint8_t> data)
    : rows_(rows), labels_(labels), data_(std::move(data)) {
    if (data_.size() != rows * labels) {
        throw DimensionError("label matrix data has " + std::to_string(data_.size()) +
                             " entries, expected " + std::to_string(rows * labels));
    }
    for (std::uint8_t v : data_) {
        if (v > 1) throw DataError("label entries must be 0 or 1, found " + std::to_string(v));
    }
}

LabelMatrix::LabelMatrix(std::initializer_list<std::initializer_list<int>> rows)
    : rows_(rows.size()), labels_(rows.size() ? rows.begin()->size() : 0) {
    data_.reserve(rows_ * labels_);
    for (const auto& r : rows) {
        if (r.size() != labels_) throw DimensionError("ragged label matrix literal");
        for (int v : r) {
            if (v != 0 && v != 1) throw DataError("label entries must be 0 or 1");
            data_.push_back(static_cast<std::uint8_t>(v));
        }
    }
}

std::size_t LabelMatrix::row_count(std::size_t r) const noexcept {
    std::size_t n = 0;
    for (std::uint8_t v : row(r)) n += v;
    return n;
}

LabelMatrix LabelMatrix::select_rows(std::span<const std::size_t> indices) const {
    LabelMatrix out(indices.size(), labels_);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= rows_) {
            throw DimensionError("label row index " + std::to_string(indices[i]) + " out of range");
        }
        std::ranges::copy(row(indices[i]), out.data_.begin() + static_cast<std::ptrdiff_t>(i * labels_));
    }
    return out;
}

LabelMatrix LabelMatrix::complement() const {
    LabelMatrix out = *this;
    for (auto& v : out.data_) v = static_cast<std::uint8_t>(1 - v);
    return out;
}

Matrix to_bipolar(const LabelMatrix& y) {
    Matrix out(y.rows(), y.labels());
    auto ov = out.values();
    const auto yv = y.values();
    for (std::size_t i = 0; i < yv.size(); ++i) ov[i] = yv[i] ? 1.0 : -1.0;
    return out;
}

LabelMatrix from_bipolar(const Matrix& y) { return decode(y, 0.0); }

LabelMatrix decode(const Matrix& raw, double threshold) {
    std::vector<std::uint8_t> bits(raw.size());
    const auto rv = raw.values();
    for (std::size_t i = 0; i < rv.size(); ++i) bits[i] = rv[i] > threshold ? 1 : 0;
    return LabelMatrix(raw.rows(), raw.cols(), std::move(bits));
}

ThresholdCalibration calibrate_threshold(const Matrix& raw, const LabelMatrix& truth) {
    if (raw.rows() != truth.rows() || raw.cols() != truth.labels()) {
        throw DimensionError("calibrate_threshold: raw " + raw.shape_string() + " vs labels " +
                             std::to_string(truth.rows()) + "x" + std::to_string(truth.labels()));
    }
    if (raw.size() == 0) throw DimensionError("calibrate_threshold: no outputs to calibrate on");
    if (!raw.all_finite()) throw DataError("calibrate_threshold: raw outputs contain non-finite values");

    const std::size_t total = raw.size();
    std::vector<std::pair<double, std::uint8_t>> entries(total);
    const auto rv = raw.values();
    const auto tv = truth.values();
    std::size_t ones = 0;
    for (std::size_t i = 0; i < total; ++i) {
        entries[i] = {rv[i], tv[i]};
        ones += tv[i];
    }
    std::ranges::sort(entries, {}, &std::pair<double, std::uint8_t>::first);

    ThresholdCalibration best;
    std::size_t best_errors = 0;
    bool have_best = false;
    std::size_t evaluated = 0;
    auto consider = [&](double t, std::size_t errors) {
        ++evaluated;
        const bool better = !have_best || errors < best_errors ||
                            (errors == best_errors &&
                             (std::abs(t) < std::abs(best.threshold) ||
                              (std::abs(t) == std::abs(best.threshold) && t < best.threshold)));
        if (better) {
            have_best = true;
            best_errors = errors;
            best.threshold = t;
        }
    };

    // Threshold below everything: every entry predicted relevant.
    consider(entries.front().first - 1.0, total - ones);

    // Sweep: with the first `le` sorted entries at or below t, errors are the
    // relevant entries among them plus the irrelevant entries above.
    std::size_t le = 0;
    std::size_t ones_le = 0;
    while (le < total) {
        const double v = entries[le].first;
        while (le < total && entries[le].first == v) ones_le += entries[le++].second;
        if (le == total) break;
        const double next = entries[le].first;
        double mid = 0.5 * v + 0.5 * next;
        if (!(mid < next)) mid = v;
        const std::size_t zeros_gt = (total - le) - (ones - ones_le);
        consider(mid, ones_le + zeros_gt);
    }

    // Threshold above everything: nothing predicted.
    consider(entries.back().first + 1.0, ones);

    best.training_hamming = static_cast<double>(best_errors) / static_cast<double>(total);
    best.candidates_evaluated = evaluated;
    return best;
}

}  // namespace osmlelm

#include "osmlelm/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>
#include <string_view>
#include <utility>

#include "osmlelm/error.hpp"

namespace osmlelm {
namespace {

void require_same_shape(const LabelMatrix& pred, const LabelMatrix& truth, const char* op) {
    if (pred.rows() != truth.rows() || pred.labels() != truth.labels()) {
        throw DimensionError(std::string(op) + ": prediction " + std::to_string(pred.rows()) + "x" +
                             std::to_string(pred.labels()) + " vs truth " +
                             std::to_string(truth.rows()) + "x" + std::to_string(truth.labels()));
    }
}

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct SetSizes {
    std::size_t pred = 0;
    std::size_t truth = 0;
    std::size_t both = 0;
};

SetSizes set_sizes(std::span<const std::uint8_t> pred, std::span<const std::uint8_t> truth) {
    SetSizes s;
    for (std::size_t l = 0; l < pred.size(); ++l) {
        s.pred += pred[l];
        s.truth += truth[l];
        s.both += pred[l] & truth[l];
    }
    return s;
}

// num/den, with 0/0 -> 1 when both sets are empty and 0 otherwise.
double ratio(std::size_t num, std::size_t den, bool both_empty) {
    if (den == 0) return both_empty ? 1.0 : 0.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

template <class Term>
double example_mean(const LabelMatrix& pred, const LabelMatrix& truth, Term term) {
    if (pred.rows() == 0) return 0.0;
    CompensatedSum sum;
    for (std::size_t i = 0; i < pred.rows(); ++i) sum.add(term(set_sizes(pred.row(i), truth.row(i))));
    return sum.value() / static_cast<double>(pred.rows());
}

constexpr std::pair<std::string_view, double MetricsReport::*> kFields[] = {
    {"hamming_loss", &MetricsReport::hamming_loss},
    {"accuracy", &MetricsReport::accuracy},
    {"precision", &MetricsReport::precision},
    {"recall", &MetricsReport::recall},
    {"f1", &MetricsReport::f1},
    {"empty_prediction_rate", &MetricsReport::empty_prediction_rate},
    {"train_time", &MetricsReport::train_time},
    {"test_time", &MetricsReport::test_time},
};

std::string fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

}  // namespace

double hamming_loss(const LabelMatrix& pred, const LabelMatrix& truth) {
    require_same_shape(pred, truth, "hamming_loss");
    const auto pv = pred.values();
    const auto tv = truth.values();
    if (pv.empty()) return 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < pv.size(); ++i) wrong += pv[i] != tv[i];
    return static_cast<double>(wrong) / static_cast<double>(pv.size());
}

double example_accuracy(const LabelMatrix& pred, const LabelMatrix& truth) {
    require_same_shape(pred, truth, "example_accuracy");
    return example_mean(pred, truth, [](const SetSizes& s) {
        const std::size_t uni = s.pred + s.truth - s.both;
        return ratio(s.both, uni, uni == 0);
    });
}

PrecisionRecallF1 example_prf(const LabelMatrix& pred, const LabelMatrix& truth) {
    require_same_shape(pred, truth, "example_prf");
    PrecisionRecallF1 r;
    r.precision = example_mean(pred, truth, [](const SetSizes& s) {
        return ratio(s.both, s.pred, s.pred == 0 && s.truth == 0);
    });
    r.recall = example_mean(pred, truth, [](const SetSizes& s) {
        return ratio(s.both, s.truth, s.pred == 0 && s.truth == 0);
    });
    r.f1 = example_mean(pred, truth, [](const SetSizes& s) {
        return ratio(2 * s.both, s.pred + s.truth, s.pred == 0 && s.truth == 0);
    });
    return r;
}

double empty_prediction_rate(const LabelMatrix& pred) {
    if (pred.rows() == 0) return 0.0;
    std::size_t empty = 0;
    for (std::size_t i = 0; i < pred.rows(); ++i) empty += pred.row_count(i) == 0;
    return static_cast<double>(empty) / static_cast<double>(pred.rows());
}

double label_cardinality(const LabelMatrix& y) {
    if (y.rows() == 0) throw DimensionError("label_cardinality: dataset has no rows");
    std::size_t total = 0;
    for (std::uint8_t v : y.values()) total += v;
    return static_cast<double>(total) / static_cast<double>(y.rows());
}

double label_density(const LabelMatrix& y) {
    if (y.labels() == 0) throw DimensionError("label_density: dataset has no labels");
    return label_cardinality(y) / static_cast<double>(y.labels());
}

MetricsReport evaluate(const LabelMatrix& pred, const LabelMatrix& truth) {
    MetricsReport r;
    r.hamming_loss = hamming_loss(pred, truth);
    r.accuracy = example_accuracy(pred, truth);
    const auto prf = example_prf(pred, truth);
    r.precision = prf.precision;
    r.recall = prf.recall;
    r.f1 = prf.f1;
    r.empty_prediction_rate = empty_prediction_rate(pred);
    return r;
}

std::string to_key_value(const MetricsReport& report) {
    std::string out;
    for (const auto& [name, field] : kFields) {
        out += name;
        out += '\t';
        out += fixed6(report.*field);
        out += '\n';
    }
    return out;
}

MetricsReport parse_key_value(const std::string& text) {
    MetricsReport r;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError("metrics line " + std::to_string(lineno) + ": missing tab");
        }
        const std::string_view key(line.data(), tab);
        bool known = false;
        for (const auto& [name, field] : kFields) {
            if (name == key) {
                r.*field = std::stod(line.substr(tab + 1));
                known = true;
            }
        }
        if (!known) {
            throw DataError("metrics line " + std::to_string(lineno) + ": unknown metric '" +
                            std::string(key) + "'");
        }
    }
    return r;
}

std::string to_table(const MetricsReport& report) {
    std::ostringstream out;
    for (const auto& [name, field] : kFields) {
        out << std::left << std::setw(24) << name << std::right << std::setw(12)
            << fixed6(report.*field) << '\n';
    }
    return out.str();
}

}  // namespace osmlelm

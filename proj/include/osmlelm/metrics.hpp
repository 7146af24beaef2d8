#pragma once

#include <string>

#include "osmlelm/labels.hpp"

namespace osmlelm {

// Example-based multi-label metrics. Per-example terms with a zero
// denominator count as 1 when both label sets are empty and 0 otherwise.

double hamming_loss(const LabelMatrix& pred, const LabelMatrix& truth);
/// Mean Jaccard index |Y ∩ Z| / |Y ∪ Z|.
double example_accuracy(const LabelMatrix& pred, const LabelMatrix& truth);

struct PrecisionRecallF1 {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

PrecisionRecallF1 example_prf(const LabelMatrix& pred, const LabelMatrix& truth);

/// Fraction of samples with no predicted label.
double empty_prediction_rate(const LabelMatrix& pred);

/// Mean number of relevant labels per sample.
double label_cardinality(const LabelMatrix& y);
/// label_cardinality / M.
double label_density(const LabelMatrix& y);

struct MetricsReport {
    double hamming_loss = 0.0;
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double empty_prediction_rate = 0.0;
    double train_time = 0.0;  // seconds
    double test_time = 0.0;   // seconds
};

/// Fills every label-based field; timings are left at zero.
MetricsReport evaluate(const LabelMatrix& pred, const LabelMatrix& truth);

/// `name<TAB>value` lines with six decimals, one metric per line.
std::string to_key_value(const MetricsReport& report);
MetricsReport parse_key_value(const std::string& text);

/// Aligned two-column text table.
std::string to_table(const MetricsReport& report);

}  // namespace osmlelm

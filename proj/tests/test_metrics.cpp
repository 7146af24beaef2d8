#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "osmlelm/error.hpp"
#include "osmlelm/metrics.hpp"
#include "support.hpp"

using namespace osmlelm;
using osmlelm::testing::random_labels;

namespace {

LabelMatrix rows_from_masks(std::initializer_list<unsigned> masks, std::size_t m) {
    LabelMatrix y(masks.size(), m);
    std::size_t r = 0;
    for (unsigned mask : masks) {
        for (std::size_t l = 0; l < m; ++l) y.set(r, l, (mask >> l) & 1u);
        ++r;
    }
    return y;
}

oracle::LabelSet row_set(const LabelMatrix& y, std::size_t r) {
    oracle::LabelSet s;
    for (std::size_t l = 0; l < y.labels(); ++l)
        if (y(r, l)) s.insert(static_cast<int>(l));
    return s;
}

struct OracleMetrics {
    double hamming, accuracy, precision, recall, f1;
};

OracleMetrics oracle_metrics(const LabelMatrix& pred, const LabelMatrix& truth) {
    oracle::Rational ham, acc, p, r, f;
    for (std::size_t i = 0; i < pred.rows(); ++i) {
        const auto t = oracle::set_terms(row_set(pred, i), row_set(truth, i));
        ham = ham + t.hamming_wrong;
        acc = acc + t.accuracy;
        p = p + t.precision;
        r = r + t.recall;
        f = f + t.f1;
    }
    const auto n = static_cast<std::int64_t>(pred.rows());
    const auto m = static_cast<std::int64_t>(pred.labels());
    return {(ham / (n * m)).value(), (acc / n).value(), (p / n).value(), (r / n).value(), (f / n).value()};
}

void check_against_oracle(const LabelMatrix& pred, const LabelMatrix& truth) {
    const auto want = oracle_metrics(pred, truth);
    const auto prf = example_prf(pred, truth);
    CHECK(std::abs(hamming_loss(pred, truth) - want.hamming) <= 1e-15);
    CHECK(std::abs(example_accuracy(pred, truth) - want.accuracy) <= 1e-15);
    CHECK(std::abs(prf.precision - want.precision) <= 1e-15);
    CHECK(std::abs(prf.recall - want.recall) <= 1e-15);
    CHECK(std::abs(prf.f1 - want.f1) <= 1e-15);
}

}  // namespace

TEST_CASE("hamming_loss") {
    const LabelMatrix truth{{1, 0, 1}, {0, 1, 1}};
    CHECK(hamming_loss(truth, truth) == 0.0);
    CHECK(hamming_loss(truth.complement(), truth) == 1.0);
    CHECK(hamming_loss(LabelMatrix{{1, 1, 1}}, LabelMatrix{{1, 0, 1}}) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK_THROWS_AS(hamming_loss(LabelMatrix{{1, 0}}, truth), DimensionError);

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        const LabelMatrix p = random_labels(7, 5, rng), t = random_labels(7, 5, rng);
        CHECK(hamming_loss(p, t) == hamming_loss(t, p));
        CHECK(hamming_loss(p, t) + hamming_loss(p.complement(), t) == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("example-based accuracy, precision, recall, F1") {
    SUBCASE("identical nonempty rows score 1") {
        const LabelMatrix y{{1, 0, 1}, {0, 1, 0}};
        CHECK(example_accuracy(y, y) == 1.0);
        const auto prf = example_prf(y, y);
        CHECK(prf.precision == 1.0);
        CHECK(prf.recall == 1.0);
        CHECK(prf.f1 == 1.0);
    }
    SUBCASE("disjoint nonempty sets score 0") {
        CHECK(example_accuracy(LabelMatrix{{1, 0, 0}}, LabelMatrix{{0, 1, 1}}) == 0.0);
    }
    SUBCASE("empty prediction against nonempty truth") {
        const auto prf = example_prf(LabelMatrix{{0, 0, 0}}, LabelMatrix{{0, 1, 0}});
        CHECK(prf.precision == 0.0);
        CHECK(prf.recall == 0.0);
        CHECK(prf.f1 == 0.0);
        CHECK(example_accuracy(LabelMatrix{{0, 0, 0}}, LabelMatrix{{0, 1, 0}}) == 0.0);
    }
    SUBCASE("both empty counts as a perfect example") {
        const LabelMatrix none{{0, 0, 0}};
        CHECK(example_accuracy(none, none) == 1.0);
        const auto prf = example_prf(none, none);
        CHECK(prf.precision == 1.0);
        CHECK(prf.recall == 1.0);
        CHECK(prf.f1 == 1.0);
    }
    SUBCASE("every single-row pair at M = 3 matches set algebra") {
        for (unsigned p = 0; p < 8; ++p)
            for (unsigned t = 0; t < 8; ++t) check_against_oracle(rows_from_masks({p}, 3), rows_from_masks({t}, 3));
    }
    SUBCASE("every two-row pair at M = 3 matches set algebra") {
        for (unsigned p = 0; p < 64; ++p)
            for (unsigned t = 0; t < 64; ++t)
                check_against_oracle(rows_from_masks({p & 7u, p >> 3}, 3), rows_from_masks({t & 7u, t >> 3}, 3));
    }
    SUBCASE("random N = 4, M = 3 cases match set algebra") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 200; ++trial)
            check_against_oracle(random_labels(4, 3, rng, 0.5), random_labels(4, 3, rng, 0.5));
    }
    SUBCASE("per example, the F1 term bounds the Jaccard term from above") {
        for (unsigned p = 0; p < 8; ++p) {
            for (unsigned t = 0; t < 8; ++t) {
                const auto pred = rows_from_masks({p}, 3), truth = rows_from_masks({t}, 3);
                CHECK(example_prf(pred, truth).f1 >= example_accuracy(pred, truth));
                CHECK(example_accuracy(pred, truth) <= 1.0);
            }
        }
    }
}

TEST_CASE("label statistics") {
    CHECK(label_cardinality(LabelMatrix{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == 1.0);
    CHECK(label_density(LabelMatrix{{1, 1}, {1, 1}}) == 1.0);
    CHECK(label_cardinality(LabelMatrix{{1, 1, 0}, {0, 0, 0}}) == 1.0);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const LabelMatrix y = random_labels(11, 7, rng);
        CHECK(label_density(y) == label_cardinality(y) / 7.0);
    }
    CHECK_THROWS_AS(label_cardinality(LabelMatrix(0, 3)), DimensionError);
}

TEST_CASE("empty prediction rate") {
    CHECK(empty_prediction_rate(LabelMatrix{{0, 0}, {1, 0}, {0, 0}, {0, 1}}) == 0.5);
}

TEST_CASE("MetricsReport rendering") {
    MetricsReport r = evaluate(LabelMatrix{{1, 0, 1}, {0, 0, 0}}, LabelMatrix{{1, 1, 0}, {0, 0, 1}});
    r.train_time = 0.1234567;
    r.test_time = 0.0000004;
    const std::string kv = to_key_value(r);
    CHECK(kv.find("hamming_loss\t0.500000\n") != std::string::npos);
    CHECK(kv.find("train_time\t0.123457\n") != std::string::npos);
    CHECK(kv.find("test_time\t0.000000\n") != std::string::npos);
    const MetricsReport back = parse_key_value(kv);
    CHECK(std::abs(back.hamming_loss - r.hamming_loss) <= 5e-7);
    CHECK(std::abs(back.f1 - r.f1) <= 5e-7);
    CHECK(std::abs(back.empty_prediction_rate - r.empty_prediction_rate) <= 5e-7);
    CHECK_THROWS_AS(parse_key_value("bogus\t1.0\n"), DataError);

    const std::string table = to_table(r);
    std::istringstream lines(table);
    std::string line;
    std::size_t count = 0;
    while (std::getline(lines, line)) {
        CHECK(line.size() == 36);
        ++count;
    }
    CHECK(count == 8);
}

#pragma once

// Reference implementations used only by tests. They take the slow,
// obviously-correct route and share no code with the library's numerics,
// labels or metrics paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

namespace osmlelm::oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense product(const Dense& a, const Dense& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    Dense c(n, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t t = 0; t < k; ++t) c[i][j] += a[i][t] * b[t][j];
    return c;
}

inline Dense transposed(const Dense& a) {
    Dense t(a.empty() ? 0 : a[0].size(), std::vector<double>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

/// Gauss-Jordan elimination with partial pivoting: returns a⁻¹·b.
inline Dense gauss_solve(Dense a, Dense b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) throw std::runtime_error("oracle: singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            for (std::size_t c = 0; c < b[r].size(); ++c) b[r][c] -= f * b[col][c];
        }
    }
    for (std::size_t r = 0; r < n; ++r)
        for (double& v : b[r]) v /= a[r][r];
    return b;
}

/// Least-squares weights minimizing ||H·beta - Y|| via the normal equations,
/// solved by Gauss-Jordan.
inline Dense least_squares(const Dense& h, const Dense& y) {
    const Dense ht = transposed(h);
    return gauss_solve(product(ht, h), product(ht, y));
}

// Label sets as std::set<int> and metric terms from set algebra.

using LabelSet = std::set<int>;

inline LabelSet intersection(const LabelSet& a, const LabelSet& b) {
    LabelSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

inline LabelSet set_union(const LabelSet& a, const LabelSet& b) {
    LabelSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

inline LabelSet symmetric_difference(const LabelSet& a, const LabelSet& b) {
    LabelSet out;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                  std::inserter(out, out.end()));
    return out;
}

/// Exact rational number p/q, reduced; used to compare metric sums exactly.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static std::int64_t gcd(std::int64_t a, std::int64_t b) {
        a = a < 0 ? -a : a;
        while (b) {
            const auto t = a % b;
            a = b;
            b = t;
        }
        return a ? a : 1;
    }
    Rational(std::int64_t p = 0, std::int64_t q = 1) {
        const auto g = gcd(p, q);
        num = p / g;
        den = q / g;
    }
    Rational operator+(const Rational& o) const { return {num * o.den + o.num * den, den * o.den}; }
    Rational operator/(std::int64_t k) const { return {num, den * k}; }
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct SetTerms {
    Rational hamming_wrong;  // |Y Δ Z|
    Rational accuracy, precision, recall, f1;
};

/// Per-example terms with the both-empty -> 1, otherwise zero-denominator -> 0
/// convention.
inline SetTerms set_terms(const LabelSet& pred, const LabelSet& truth) {
    SetTerms t;
    const auto inter = static_cast<std::int64_t>(intersection(pred, truth).size());
    const auto uni = static_cast<std::int64_t>(set_union(pred, truth).size());
    const auto np = static_cast<std::int64_t>(pred.size());
    const auto nt = static_cast<std::int64_t>(truth.size());
    const bool both_empty = pred.empty() && truth.empty();
    t.hamming_wrong = Rational(static_cast<std::int64_t>(symmetric_difference(pred, truth).size()));
    t.accuracy = uni ? Rational(inter, uni) : Rational(both_empty ? 1 : 0);
    t.precision = np ? Rational(inter, np) : Rational(both_empty ? 1 : 0);
    t.recall = nt ? Rational(inter, nt) : Rational(both_empty ? 1 : 0);
    t.f1 = (np + nt) ? Rational(2 * inter, np + nt) : Rational(both_empty ? 1 : 0);
    return t;
}

/// Label set encoded by the low `m` bits of `mask`.
inline LabelSet set_from_mask(unsigned mask, int m) {
    LabelSet s;
    for (int l = 0; l < m; ++l)
        if (mask & (1u << l)) s.insert(l);
    return s;
}

/// Counts label-slot disagreements of thresholding raw at t: 1 iff raw > t.
inline std::size_t threshold_errors(const std::vector<double>& raw, const std::vector<int>& truth,
                                    double t) {
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) wrong += (raw[i] > t ? 1 : 0) != truth[i];
    return wrong;
}

/// Every candidate threshold: midpoints of consecutive distinct values plus
/// one below the minimum and one above the maximum.
inline std::vector<double> threshold_candidates(std::vector<double> raw) {
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    std::vector<double> c{raw.front() - 1.0};
    for (std::size_t i = 1; i < raw.size(); ++i) c.push_back((raw[i - 1] + raw[i]) / 2.0);
    c.push_back(raw.back() + 1.0);
    return c;
}

}  // namespace osmlelm::oracle

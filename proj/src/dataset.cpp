#include "osmlelm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>

#include "osmlelm/error.hpp"

namespace osmlelm {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw DataError("line " + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view token, std::size_t line) {
    token = trim(token);
    if (!token.empty() && token.front() == '+') token.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        parse_fail(line, "cannot parse '" + std::string(token) + "' as a number");
    }
    if (!std::isfinite(v)) parse_fail(line, "non-finite value '" + std::string(token) + "'");
    return v;
}

std::size_t parse_index(std::string_view token, std::size_t line, const char* what) {
    token = trim(token);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
        parse_fail(line, std::string("cannot parse ") + what + " index '" + std::string(token) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? s.npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open '" + path.string() + "'");
    return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    return out;
}

std::string real17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

LabeledDataset LabeledDataset::select_rows(std::span<const std::size_t> indices) const {
    LabeledDataset out;
    out.features = features.select_rows(indices);
    out.labels = labels.select_rows(indices);
    out.feature_names = feature_names;
    out.label_names = label_names;
    out.domain_tag = domain_tag;
    return out;
}

LabeledDataset LabeledDataset::row_block(std::size_t first, std::size_t count) const {
    std::vector<std::size_t> idx(count);
    std::iota(idx.begin(), idx.end(), first);
    return select_rows(idx);
}

LabeledDataset read_csv(std::istream& in, std::size_t label_count, bool has_header) {
    if (label_count == 0) throw ConfigError("read_csv: label count must be >= 1");
    LabeledDataset ds;
    std::vector<double> features;
    std::vector<std::uint8_t> labels;
    std::size_t width = 0;
    std::size_t rows = 0;
    std::size_t lineno = 0;
    std::string line;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view text = trim(line);
        if (text.empty()) continue;
        const auto fields = split(text, ',');
        if (header_pending) {
            header_pending = false;
            if (fields.size() <= label_count) {
                parse_fail(lineno, "header has " + std::to_string(fields.size()) +
                                       " columns, need more than " + std::to_string(label_count));
            }
            const std::size_t d = fields.size() - label_count;
            for (std::size_t i = 0; i < fields.size(); ++i) {
                auto& names = i < d ? ds.feature_names : ds.label_names;
                names.emplace_back(trim(fields[i]));
            }
            width = fields.size();
            continue;
        }
        if (width == 0) {
            if (fields.size() <= label_count) {
                parse_fail(lineno, "row has " + std::to_string(fields.size()) +
                                       " fields, need more than the " +
                                       std::to_string(label_count) + " label columns");
            }
            width = fields.size();
        } else if (fields.size() != width) {
            parse_fail(lineno, "ragged row: " + std::to_string(fields.size()) + " fields, expected " +
                                   std::to_string(width));
        }
        const std::size_t d = width - label_count;
        for (std::size_t i = 0; i < d; ++i) features.push_back(parse_real(fields[i], lineno));
        for (std::size_t i = d; i < width; ++i) {
            const auto f = trim(fields[i]);
            if (f == "0") {
                labels.push_back(0);
            } else if (f == "1") {
                labels.push_back(1);
            } else {
                parse_fail(lineno, "label field '" + std::string(f) + "' is not 0 or 1");
            }
        }
        ++rows;
    }
    if (rows == 0) throw DataError("no data rows (line " + std::to_string(lineno) + ")");
    const std::size_t d = width - label_count;
    ds.features = Matrix(rows, d, std::move(features));
    ds.labels = LabelMatrix(rows, label_count, std::move(labels));
    return ds;
}

LabeledDataset load_csv(const std::filesystem::path& path, std::size_t label_count,
                        bool has_header) {
    auto in = open_input(path);
    try {
        return read_csv(in, label_count, has_header);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_csv(std::ostream& out, const LabeledDataset& ds) {
    if (!ds.feature_names.empty() || !ds.label_names.empty()) {
        bool first = true;
        for (const auto* names : {&ds.feature_names, &ds.label_names}) {
            for (const auto& n : *names) {
                if (!first) out << ',';
                out << n;
                first = false;
            }
        }
        out << '\n';
    }
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        for (double v : ds.features.row(r)) out << real17(v) << ',';
        const auto lr = ds.labels.row(r);
        for (std::size_t l = 0; l < lr.size(); ++l) out << (l ? "," : "") << int(lr[l]);
        out << '\n';
    }
}

void save_csv(const std::filesystem::path& path, const LabeledDataset& ds) {
    auto out = open_output(path);
    write_csv(out, ds);
}

LabeledDataset read_sparse(std::istream& in, std::size_t feature_count, std::size_t label_count) {
    if (feature_count == 0 || label_count == 0) {
        throw ConfigError("read_sparse: feature and label counts must be >= 1");
    }
    std::vector<double> features;
    std::vector<std::uint8_t> labels;
    std::size_t rows = 0;
    std::size_t lineno = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view text(line);
        if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
        if (trim(text).empty()) continue;

        features.resize(features.size() + feature_count, 0.0);
        labels.resize(labels.size() + label_count, 0);
        double* frow = features.data() + rows * feature_count;
        std::uint8_t* lrow = labels.data() + rows * label_count;
        std::vector<bool> seen(feature_count, false);

        std::istringstream tokens{std::string(text)};
        const bool has_labels = text.front() != ' ' && text.front() != '\t';
        std::string token;
        bool first = true;
        while (tokens >> token) {
            const bool label_token = first && has_labels && token.find(':') == std::string::npos;
            first = false;
            if (label_token) {
                for (auto part : split(token, ',')) {
                    const std::size_t idx = parse_index(part, lineno, "label");
                    if (idx < 1 || idx > label_count) {
                        parse_fail(lineno, "label index " + std::to_string(idx) + " out of range 1.." +
                                               std::to_string(label_count));
                    }
                    if (lrow[idx - 1]) parse_fail(lineno, "duplicate label index " + std::to_string(idx));
                    lrow[idx - 1] = 1;
                }
                continue;
            }
            const auto colon = token.find(':');
            if (colon == std::string::npos) parse_fail(lineno, "expected index:value, got '" + token + "'");
            const std::string_view tv(token);
            const std::size_t idx = parse_index(tv.substr(0, colon), lineno, "feature");
            if (idx < 1 || idx > feature_count) {
                parse_fail(lineno, "feature index " + std::to_string(idx) + " out of range 1.." +
                                       std::to_string(feature_count));
            }
            if (seen[idx - 1]) parse_fail(lineno, "duplicate feature index " + std::to_string(idx));
            seen[idx - 1] = true;
            frow[idx - 1] = parse_real(tv.substr(colon + 1), lineno);
        }
        ++rows;
    }
    if (rows == 0) throw DataError("no data rows (line " + std::to_string(lineno) + ")");
    LabeledDataset ds;
    ds.features = Matrix(rows, feature_count, std::move(features));
    ds.labels = LabelMatrix(rows, label_count, std::move(labels));
    return ds;
}

LabeledDataset load_sparse(const std::filesystem::path& path, std::size_t feature_count,
                           std::size_t label_count) {
    auto in = open_input(path);
    try {
        return read_sparse(in, feature_count, label_count);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

void write_sparse(std::ostream& out, const LabeledDataset& ds) {
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        std::string line;
        const auto lr = ds.labels.row(r);
        for (std::size_t l = 0; l < lr.size(); ++l) {
            if (!lr[l]) continue;
            if (!line.empty()) line += ',';
            line += std::to_string(l + 1);
        }
        bool any_feature = false;
        const auto fr = ds.features.row(r);
        for (std::size_t f = 0; f < fr.size(); ++f) {
            if (fr[f] == 0.0) continue;
            line += ' ' + std::to_string(f + 1) + ':' + real17(fr[f]);
            any_feature = true;
        }
        // An empty sample still needs a token so the line is not skipped.
        if (!any_feature) line += " 1:0";
        out << line << '\n';
    }
}

void save_sparse(const std::filesystem::path& path, const LabeledDataset& ds) {
    auto out = open_output(path);
    write_sparse(out, ds);
}

double Normalizer::apply(std::size_t feature, double value) const noexcept {
    const double span = hi[feature] - lo[feature];
    if (!(span > 0.0)) return 0.0;
    return 2.0 * (value - lo[feature]) / span - 1.0;
}

Normalizer fit_normalizer(const Matrix& features, std::size_t first, std::size_t count) {
    if (count == 0) throw ConfigError("fit_normalizer: empty row range");
    if (first + count > features.rows()) {
        throw DimensionError("fit_normalizer: rows [" + std::to_string(first) + ", " +
                             std::to_string(first + count) + ") outside " + features.shape_string());
    }
    Normalizer norm;
    const auto r0 = features.row(first);
    norm.lo.assign(r0.begin(), r0.end());
    norm.hi.assign(r0.begin(), r0.end());
    for (std::size_t r = first + 1; r < first + count; ++r) {
        const auto row = features.row(r);
        for (std::size_t f = 0; f < row.size(); ++f) {
            norm.lo[f] = std::min(norm.lo[f], row[f]);
            norm.hi[f] = std::max(norm.hi[f], row[f]);
        }
    }
    return norm;
}

Normalizer fit_normalizer(const LabeledDataset& ds, std::size_t first, std::size_t count) {
    return fit_normalizer(ds.features, first, count);
}

Normalizer fit_normalizer(const LabeledDataset& ds) { return fit_normalizer(ds.features, 0, ds.rows()); }

Matrix apply_normalizer(const Normalizer& norm, const Matrix& features) {
    if (features.cols() != norm.feature_count()) {
        throw DimensionError("apply_normalizer: " + std::to_string(features.cols()) +
                             " features, normalizer fitted on " + std::to_string(norm.feature_count()));
    }
    Matrix out(features.rows(), features.cols());
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto in = features.row(r);
        auto o = out.row(r);
        for (std::size_t f = 0; f < in.size(); ++f) o[f] = norm.apply(f, in[f]);
    }
    return out;
}

LabeledDataset apply_normalizer(const Normalizer& norm, const LabeledDataset& ds) {
    LabeledDataset out = ds;
    out.features = apply_normalizer(norm, ds.features);
    return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(idx[i - 1], idx[j]);
    }
    return idx;
}

std::vector<Fold> kfold(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2 || k > n) {
        throw ConfigError("kfold: k = " + std::to_string(k) + " must lie in [2, " + std::to_string(n) + "]");
    }
    const auto perm = shuffled_indices(n, seed);
    std::vector<Fold> folds(k);
    std::size_t start = 0;
    for (std::size_t f = 0; f < k; ++f) {
        const std::size_t size = n / k + (f < n % k ? 1 : 0);
        auto& test = folds[f].test;
        test.assign(perm.begin() + static_cast<std::ptrdiff_t>(start),
                    perm.begin() + static_cast<std::ptrdiff_t>(start + size));
        std::ranges::sort(test);
        start += size;
    }
    for (auto& fold : folds) {
        fold.train.reserve(n - fold.test.size());
        std::size_t t = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (t < fold.test.size() && fold.test[t] == i) {
                ++t;
            } else {
                fold.train.push_back(i);
            }
        }
    }
    return folds;
}

std::vector<Fold> kfold(const LabeledDataset& ds, std::size_t k, std::uint64_t seed) {
    return kfold(ds.rows(), k, seed);
}

std::vector<Fold> read_fold_file(const std::filesystem::path& path, std::size_t n) {
    auto in = open_input(path);
    std::vector<Fold> folds;
    std::vector<bool> used(n, false);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        Fold fold;
        std::istringstream tokens(line);
        std::string token;
        while (tokens >> token) {
            const std::size_t idx = parse_index(token, lineno, "test");
            if (idx >= n) {
                parse_fail(lineno, "test index " + std::to_string(idx) + " out of range for " +
                                       std::to_string(n) + " rows");
            }
            if (used[idx]) parse_fail(lineno, "index " + std::to_string(idx) + " appears in two folds");
            used[idx] = true;
            fold.test.push_back(idx);
        }
        std::ranges::sort(fold.test);
        folds.push_back(std::move(fold));
    }
    if (folds.size() < 2) throw DataError(path.string() + ": need at least 2 folds");
    if (!std::ranges::all_of(used, [](bool b) { return b; })) {
        throw DataError(path.string() + ": folds do not cover every row");
    }
    for (auto& fold : folds) {
        std::size_t t = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (t < fold.test.size() && fold.test[t] == i) {
                ++t;
            } else {
                fold.train.push_back(i);
            }
        }
    }
    return folds;
}

void write_fold_file(const std::filesystem::path& path, std::span<const Fold> folds) {
    auto out = open_output(path);
    for (const auto& fold : folds) {
        for (std::size_t i = 0; i < fold.test.size(); ++i) out << (i ? " " : "") << fold.test[i];
        out << '\n';
    }
}

void validate_plan(const StreamPlan& plan, std::size_t n) {
    if (plan.init_block_size < 1 || plan.block_size < 1) {
        throw ConfigError("stream plan: block sizes must be >= 1");
    }
    if (plan.init_block_size > n) {
        throw ConfigError("stream plan: initial block of " + std::to_string(plan.init_block_size) +
                          " rows exceeds the " + std::to_string(n) + " available");
    }
}

std::size_t block_count(const StreamPlan& plan, std::size_t n) {
    validate_plan(plan, n);
    const std::size_t rest = n - plan.init_block_size;
    return 1 + (rest + plan.block_size - 1) / plan.block_size;
}

std::vector<LabeledDataset> stream_blocks(const LabeledDataset& ds, const StreamPlan& plan) {
    validate_plan(plan, ds.rows());
    std::vector<std::size_t> order(ds.rows());
    if (plan.shuffle_seed) {
        order = shuffled_indices(ds.rows(), *plan.shuffle_seed);
    } else {
        std::iota(order.begin(), order.end(), std::size_t{0});
    }
    std::vector<LabeledDataset> blocks;
    blocks.reserve(block_count(plan, ds.rows()));
    const std::span<const std::size_t> all(order);
    blocks.push_back(ds.select_rows(all.subspan(0, plan.init_block_size)));
    for (std::size_t start = plan.init_block_size; start < order.size(); start += plan.block_size) {
        const std::size_t size = std::min(plan.block_size, order.size() - start);
        blocks.push_back(ds.select_rows(all.subspan(start, size)));
    }
    return blocks;
}

}  // namespace osmlelm

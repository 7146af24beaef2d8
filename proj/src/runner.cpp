#include "osmlelm/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "osmlelm/error.hpp"
#include "osmlelm/labels.hpp"
#include "osmlelm/model.hpp"
#include "osmlelm/numerics.hpp"

namespace osmlelm {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string trim_copy(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

template <class T>
T parse_number(std::string_view key, std::string_view value) {
    T v{};
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("config '" + std::string(key) + "': cannot parse '" + std::string(value) + "'");
    }
    return v;
}

bool parse_flag(std::string_view key, std::string_view value) {
    if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
    if (value == "0" || value == "false" || value == "no" || value == "off") return false;
    throw ConfigError("config '" + std::string(key) + "': expected a boolean, got '" +
                      std::string(value) + "'");
}

NormalizeMode parse_normalize(std::string_view value) {
    if (value == "init" || value == "init_block") return NormalizeMode::init_block;
    if (value == "train" || value == "train_set") return NormalizeMode::train_set;
    if (value == "none") return NormalizeMode::none;
    throw ConfigError("unknown normalize mode '" + std::string(value) + "' (init|train|none)");
}

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw DataError("failed writing '" + path.string() + "'");
}

void require_path(const std::filesystem::path& p, const char* what) {
    if (p.empty()) throw ConfigError(std::string("missing required ") + what);
}

// Hidden-layer outputs and labels of every sample absorbed so far, kept only
// when the threshold is recalibrated after each block.
struct SeenSamples {
    std::vector<double> hidden;
    std::vector<std::uint8_t> labels;
    std::size_t rows = 0;

    void append(const Matrix& h, const LabelMatrix& y) {
        hidden.insert(hidden.end(), h.values().begin(), h.values().end());
        labels.insert(labels.end(), y.values().begin(), y.values().end());
        rows += h.rows();
    }
};

constexpr double MetricsReport::*kReportFields[] = {
    &MetricsReport::hamming_loss, &MetricsReport::accuracy,   &MetricsReport::precision,
    &MetricsReport::recall,       &MetricsReport::f1,         &MetricsReport::empty_prediction_rate,
    &MetricsReport::train_time,   &MetricsReport::test_time,
};

constexpr const char* kReportNames[] = {
    "hamming_loss", "accuracy", "precision", "recall", "f1", "empty_prediction_rate",
    "train_time",   "test_time",
};

}  // namespace

void set_config_value(RunConfig& c, std::string_view raw_key, std::string_view raw_value) {
    std::string key(raw_key);
    std::ranges::replace(key, '-', '_');
    const std::string value = trim_copy(raw_value);

    if (key == "train" || key == "train_path") {
        c.train_path = value;
    } else if (key == "test" || key == "test_path") {
        c.test_path = value;
    } else if (key == "data" || key == "data_path") {
        c.data_path = value;
    } else if (key == "fold_file") {
        c.fold_file = value;
    } else if (key == "model" || key == "model_path") {
        c.model_path = value;
    } else if (key == "out" || key == "out_path" || key == "output") {
        c.out_path = value;
    } else if (key == "format") {
        if (value == "csv") {
            c.format = DataFormat::csv;
        } else if (value == "sparse") {
            c.format = DataFormat::sparse;
        } else {
            throw ConfigError("unknown format '" + value + "' (csv|sparse)");
        }
    } else if (key == "header" || key == "has_header") {
        c.has_header = parse_flag(key, value);
    } else if (key == "labels" || key == "label_count") {
        c.label_count = parse_number<std::size_t>(key, value);
    } else if (key == "features" || key == "feature_count") {
        c.feature_count = parse_number<std::size_t>(key, value);
    } else if (key == "hidden" || key == "hidden_count") {
        c.hidden_count = parse_number<std::size_t>(key, value);
    } else if (key == "activation") {
        c.activation = parse_activation(value);
    } else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "ridge") {
        c.ridge = parse_number<double>(key, value);
        if (!(c.ridge >= 0.0) || !std::isfinite(c.ridge)) throw ConfigError("ridge must be >= 0");
    } else if (key == "init_block" || key == "init_block_size") {
        c.init_block_size = parse_number<std::size_t>(key, value);
    } else if (key == "block" || key == "block_size") {
        c.block_size = parse_number<std::size_t>(key, value);
        if (c.block_size == 0) throw ConfigError("block size must be >= 1");
    } else if (key == "shuffle_seed") {
        c.shuffle_seed = parse_number<std::uint64_t>(key, value);
    } else if (key == "recalibrate" || key == "recalibrate_threshold") {
        c.recalibrate_threshold = parse_flag(key, value);
    } else if (key == "folds" || key == "k") {
        c.folds = parse_number<std::size_t>(key, value);
    } else if (key == "normalize") {
        c.normalize = parse_normalize(value);
    } else if (key == "arrival_interval") {
        c.arrival_interval = parse_number<double>(key, value);
    } else {
        throw ConfigError("unknown config key '" + std::string(raw_key) + "'");
    }
}

void load_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim_copy(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        }
        set_config_value(config, trim_copy(text.substr(0, eq)), text.substr(eq + 1));
    }
}

std::size_t resolve_init_block(const RunConfig& config, std::size_t n) {
    if (config.init_block_size > 0) return config.init_block_size;
    return std::min(n, 2 * config.hidden_count);
}

LabeledDataset load_dataset(const RunConfig& config, const std::filesystem::path& path) {
    if (config.label_count == 0) throw ConfigError("--labels M is required");
    if (config.format == DataFormat::sparse) {
        if (config.feature_count == 0) throw ConfigError("--features D is required for sparse input");
        return load_sparse(path, config.feature_count, config.label_count);
    }
    return load_csv(path, config.label_count, config.has_header);
}

TrainResult train_stream(const LabeledDataset& train, const RunConfig& config,
                         NormalizeMode default_normalize) {
    if (config.hidden_count == 0) throw ConfigError("--hidden N is required and must be >= 1");
    const StreamPlan plan{resolve_init_block(config, train.rows()), config.block_size,
                          config.shuffle_seed};
    std::vector<LabeledDataset> blocks = stream_blocks(train, plan);

    TrainResult result;
    switch (config.normalize.value_or(default_normalize)) {
        case NormalizeMode::init_block: result.model.normalizer = fit_normalizer(blocks.front()); break;
        case NormalizeMode::train_set: result.model.normalizer = fit_normalizer(train); break;
        case NormalizeMode::none: break;
    }
    if (result.model.normalizer) {
        for (auto& b : blocks) b.features = apply_normalizer(*result.model.normalizer, b.features);
    }
    std::vector<Matrix> targets;
    targets.reserve(blocks.size());
    for (const auto& b : blocks) targets.push_back(to_bipolar(b.labels));

    const HiddenLayer layer =
        init_hidden(train.feature_count(), config.hidden_count, config.activation, config.seed);
    OselmModel& model = result.model.model;
    SeenSamples seen;
    result.block_times.reserve(blocks.size());

    const auto start = Clock::now();
    {
        const auto t = Clock::now();
        model = init_phase(layer, blocks.front().features, targets.front(), config.ridge);
        model.threshold =
            calibrate_threshold(predict_raw(model, blocks.front().features), blocks.front().labels)
                .threshold;
        if (config.recalibrate_threshold) {
            seen.append(hidden_output(model.hidden, blocks.front().features), blocks.front().labels);
        }
        result.block_times.push_back(seconds_since(t));
    }
    for (std::size_t i = 1; i < blocks.size(); ++i) {
        const auto t = Clock::now();
        const Matrix h = hidden_output(model.hidden, blocks[i].features);
        update_hidden(model, h, targets[i]);
        if (config.recalibrate_threshold) {
            seen.append(h, blocks[i].labels);
            const Matrix h_seen(seen.rows, model.hidden_count(), seen.hidden);
            const LabelMatrix y_seen(seen.rows, model.label_count(), seen.labels);
            model.threshold = calibrate_threshold(matmul(h_seen, model.beta), y_seen).threshold;
        }
        result.block_times.push_back(seconds_since(t));
    }
    result.train_time = seconds_since(start);
    return result;
}

MetricsReport evaluate_model(const ModelFile& file, const LabeledDataset& test) {
    const auto& model = file.model;
    if (test.feature_count() != model.input_dim() || test.label_count() != model.label_count()) {
        throw DimensionError("dataset has " + std::to_string(test.feature_count()) + " features and " +
                             std::to_string(test.label_count()) + " labels; model expects " +
                             std::to_string(model.input_dim()) + " and " +
                             std::to_string(model.label_count()));
    }
    const Matrix x = file.normalizer ? apply_normalizer(*file.normalizer, test.features) : test.features;
    const auto start = Clock::now();
    const LabelMatrix pred = decode(predict_raw(model, x), model.threshold);
    const double test_time = seconds_since(start);
    MetricsReport report = evaluate(pred, test.labels);
    report.test_time = test_time;
    return report;
}

TrainResult cmd_train(const RunConfig& config, std::ostream& out) {
    require_path(config.train_path, "training data (--train)");
    require_path(config.out_path, "model output path (--out)");
    const LabeledDataset train = load_dataset(config, config.train_path);
    TrainResult result = train_stream(train, config);
    save_model(config.out_path, result.model);

    const auto& m = result.model.model;
    out << "samples: " << train.rows() << " (" << train.feature_count() << " features, "
        << train.label_count() << " labels)\n";
    out << "hidden neurons: " << m.hidden_count() << " (" << to_string(m.hidden.activation()) << ")\n";
    out << "blocks processed: " << result.blocks() << "\n";
    out << "threshold: " << fixed(m.threshold, 6) << "\n";
    out << "training time: " << fixed(result.train_time, 3) << " s\n";
    out << "model written to " << config.out_path.string() << "\n";
    return result;
}

MetricsReport cmd_eval(const RunConfig& config, std::ostream& out) {
    require_path(config.model_path, "model file (--model)");
    require_path(config.test_path, "test data (--test)");
    const ModelFile model = load_model(config.model_path);
    RunConfig data_config = config;
    if (data_config.label_count == 0) data_config.label_count = model.model.label_count();
    if (data_config.feature_count == 0) data_config.feature_count = model.model.input_dim();
    const LabeledDataset test = load_dataset(data_config, config.test_path);
    const MetricsReport report = evaluate_model(model, test);
    out << to_table(report);
    if (!config.out_path.empty()) write_text(config.out_path, to_key_value(report));
    return report;
}

CvResult cmd_cv(const RunConfig& config, std::ostream& out) {
    const auto& path = config.data_path.empty() ? config.train_path : config.data_path;
    require_path(path, "dataset (--data)");
    const LabeledDataset data = load_dataset(config, path);
    const std::vector<Fold> folds = config.fold_file.empty()
                                        ? kfold(data, config.folds, config.seed)
                                        : read_fold_file(config.fold_file, data.rows());

    CvResult result;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        RunConfig fold_config = config;
        fold_config.seed = config.seed + f;
        const TrainResult trained =
            train_stream(data.select_rows(folds[f].train), fold_config, NormalizeMode::train_set);
        MetricsReport report = evaluate_model(trained.model, data.select_rows(folds[f].test));
        report.train_time = trained.train_time;
        out << "fold " << (f + 1) << ": hamming_loss " << fixed(report.hamming_loss, 6)
            << "  accuracy " << fixed(report.accuracy, 6) << "  f1 " << fixed(report.f1, 6) << "\n";
        result.folds.push_back(report);
    }

    const double k = static_cast<double>(result.folds.size());
    for (auto field : kReportFields) {
        double sum = 0.0;
        for (const auto& r : result.folds) sum += r.*field;
        const double mean = sum / k;
        double ss = 0.0;
        for (const auto& r : result.folds) ss += (r.*field - mean) * (r.*field - mean);
        result.mean.*field = mean;
        result.stddev.*field = std::sqrt(ss / (k - 1.0));
    }

    out << folds.size() << "-fold cross-validation (mean ± sample std)\n";
    std::string kv;
    for (std::size_t i = 0; i < std::size(kReportFields); ++i) {
        const auto field = kReportFields[i];
        char line[128];
        std::snprintf(line, sizeof line, "%-24s%s\n", kReportNames[i],
                      format_mean_std(result.mean.*field, result.stddev.*field).c_str());
        out << line;
        kv += std::string(kReportNames[i]) + '\t' + fixed(result.mean.*field, 6) + '\n';
        kv += std::string(kReportNames[i]) + "_std\t" + fixed(result.stddev.*field, 6) + '\n';
    }
    if (!config.out_path.empty()) write_text(config.out_path, kv);
    return result;
}

BenchResult cmd_bench(const RunConfig& config, std::ostream& out) {
    require_path(config.train_path, "training data (--train)");
    const LabeledDataset train = load_dataset(config, config.train_path);
    const TrainResult trained = train_stream(train, config);

    BenchResult r;
    r.train_time = trained.train_time;
    r.blocks = trained.blocks();
    r.average_block_time = r.train_time / static_cast<double>(r.blocks);
    r.block_times = trained.block_times;
    r.max_block_time = *std::ranges::max_element(r.block_times);
    if (config.arrival_interval) r.realtime_feasible = r.average_block_time < *config.arrival_interval;

    char line[160];
    std::snprintf(line, sizeof line, "%-28s%.6f\n", "training time (s)", r.train_time);
    out << line;
    std::snprintf(line, sizeof line, "%-28s%zu\n", "number of blocks", r.blocks);
    out << line;
    std::snprintf(line, sizeof line, "%-28s%.8f\n", "average time per block (s)", r.average_block_time);
    out << line;
    std::snprintf(line, sizeof line, "%-28s%.8f\n", "max block time (s)", r.max_block_time);
    out << line;
    if (r.realtime_feasible) {
        std::snprintf(line, sizeof line, "%-28s%s (arrival interval %.6f s)\n", "real-time feasible",
                      *r.realtime_feasible ? "yes" : "no", *config.arrival_interval);
        out << line;
    }
    if (!config.out_path.empty()) {
        std::string kv;
        kv += "train_time\t" + fixed(r.train_time, 6) + '\n';
        kv += "blocks\t" + std::to_string(r.blocks) + '\n';
        kv += "average_block_time\t" + fixed(r.average_block_time, 6) + '\n';
        kv += "max_block_time\t" + fixed(r.max_block_time, 6) + '\n';
        if (r.realtime_feasible) kv += std::string("realtime_feasible\t") + (*r.realtime_feasible ? "1" : "0") + '\n';
        write_text(config.out_path, kv);
    }
    return r;
}

std::string format_mean_std(double mean, double stddev, int decimals) {
    return fixed(mean, decimals) + " ± " + fixed(stddev, decimals);
}

int exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const DataError*>(&e) || dynamic_cast<const DimensionError*>(&e)) return 2;
    if (dynamic_cast<const NumericalError*>(&e)) return 3;
    return 1;
}

}  // namespace osmlelm

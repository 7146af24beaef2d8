#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "osmlelm/dataset.hpp"
#include "osmlelm/hidden_layer.hpp"
#include "osmlelm/metrics.hpp"
#include "osmlelm/model_io.hpp"

namespace osmlelm {

enum class DataFormat { csv, sparse };

/// Which rows the feature normalizer is fitted on.
enum class NormalizeMode { init_block, train_set, none };

struct RunConfig {
    std::filesystem::path train_path;
    std::filesystem::path test_path;
    std::filesystem::path data_path;   // single-file mode for cv
    std::filesystem::path fold_file;   // optional, cv only
    std::filesystem::path model_path;  // eval input
    std::filesystem::path out_path;
    DataFormat format = DataFormat::csv;
    bool has_header = false;
    std::size_t label_count = 0;
    std::size_t feature_count = 0;  // required for sparse input
    std::size_t hidden_count = 0;   // required, no default
    Activation activation = Activation::sigmoid;
    std::uint64_t seed = 1;
    double ridge = 0.0;
    std::size_t init_block_size = 0;  // 0 picks min(N, 2 * hidden_count)
    std::size_t block_size = 1;
    std::optional<std::uint64_t> shuffle_seed;
    bool recalibrate_threshold = false;
    std::size_t folds = 0;
    std::optional<NormalizeMode> normalize;  // unset: per-command default
    std::optional<double> arrival_interval;  // seconds, bench only
};

/// Sets one field from its RunConfig name (e.g. "hidden_count"). Dashes and
/// underscores are interchangeable. Throws ConfigError on unknown keys or bad
/// values.
void set_config_value(RunConfig& config, std::string_view key, std::string_view value);

/// Flat `key = value` file; blank lines and `#` comments are ignored.
void load_config_file(RunConfig& config, const std::filesystem::path& path);

/// Returns the init block size actually used for n training rows.
std::size_t resolve_init_block(const RunConfig& config, std::size_t n);

LabeledDataset load_dataset(const RunConfig& config, const std::filesystem::path& path);

struct TrainResult {
    ModelFile model;
    double train_time = 0.0;              // seconds, training only
    std::vector<double> block_times;      // init block first
    std::size_t blocks() const noexcept { return block_times.size(); }
};

/// Streams `train` through init_phase and block updates per the config.
TrainResult train_stream(const LabeledDataset& train, const RunConfig& config,
                         NormalizeMode default_normalize = NormalizeMode::init_block);

/// Predicts, decodes with the stored threshold and scores against `test`.
MetricsReport evaluate_model(const ModelFile& model, const LabeledDataset& test);

TrainResult cmd_train(const RunConfig& config, std::ostream& out);
MetricsReport cmd_eval(const RunConfig& config, std::ostream& out);

struct CvResult {
    std::vector<MetricsReport> folds;
    MetricsReport mean;
    MetricsReport stddev;  // sample standard deviation
};

CvResult cmd_cv(const RunConfig& config, std::ostream& out);

struct BenchResult {
    double train_time = 0.0;
    std::size_t blocks = 0;
    double average_block_time = 0.0;  // train_time / blocks
    double max_block_time = 0.0;
    std::vector<double> block_times;
    std::optional<bool> realtime_feasible;
};

BenchResult cmd_bench(const RunConfig& config, std::ostream& out);

/// "0.206 ± 0.001"
std::string format_mean_std(double mean, double stddev, int decimals = 3);

/// Process exit code for an exception escaping a command: 2 data/dimension,
/// 3 numerical, 1 anything else.
int exit_code_for(const std::exception& e) noexcept;

}  // namespace osmlelm

// Command-line front end: train, eval, cv, bench.

#include <CLI11.hpp>

#include <deque>
#include <iostream>
#include <string>

#include "osmlelm/error.hpp"
#include "osmlelm/runner.hpp"

namespace {

struct FlagBinding {
    CLI::Option* option = nullptr;
    std::string key;
    std::string value;
    bool is_switch = false;
};

class Flags {
public:
    void value(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
        auto& b = bindings_.emplace_back();
        b.key = key;
        b.option = app->add_option(name, b.value, help);
    }

    void flag(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
        auto& b = bindings_.emplace_back();
        b.key = key;
        b.is_switch = true;
        b.option = app->add_flag(name, help);
    }

    // Config file first, then any flag given on the command line on top.
    osmlelm::RunConfig build(const std::string& config_file) const {
        osmlelm::RunConfig config;
        if (!config_file.empty()) osmlelm::load_config_file(config, config_file);
        for (const auto& b : bindings_) {
            if (b.option->count() == 0) continue;
            osmlelm::set_config_value(config, b.key, b.is_switch ? "true" : b.value);
        }
        return config;
    }

private:
    std::deque<FlagBinding> bindings_;  // stable addresses for CLI11
};

void add_model_flags(CLI::App* app, Flags& flags) {
    flags.value(app, "--hidden", "hidden_count", "Number of hidden neurons (required)");
    flags.value(app, "--activation", "activation", "sigmoid|sine|hardlim");
    flags.value(app, "--seed", "seed", "Seed for the random hidden layer");
    flags.value(app, "--ridge", "ridge", "Ridge added to HᵀH in the initial block (default 0)");
    flags.value(app, "--init-block", "init_block_size", "Rows in the initial block (default 2 x hidden)");
    flags.value(app, "--block", "block_size", "Rows per streamed block (default 1)");
    flags.value(app, "--shuffle-seed", "shuffle_seed", "Shuffle training rows with this seed first");
    flags.value(app, "--normalize", "normalize", "Fit the feature scaler on init|train|none");
    flags.flag(app, "--recalibrate", "recalibrate_threshold",
               "Recalibrate the threshold after every block");
}

void add_data_flags(CLI::App* app, Flags& flags) {
    flags.value(app, "--labels", "label_count", "Number of labels M");
    flags.value(app, "--features", "feature_count", "Number of features D (sparse input)");
    flags.value(app, "--format", "format", "csv|sparse");
    flags.flag(app, "--header", "has_header", "CSV input has a header line");
    flags.value(app, "--out", "out_path", "Output path");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online sequential multi-label extreme learning machine"};
    app.require_subcommand(1);
    std::string config_file;
    app.add_option("--config", config_file, "Flat key = value run configuration; flags override it");

    Flags train_flags, eval_flags, cv_flags, bench_flags;

    auto* train = app.add_subcommand("train", "Stream a training set through the model and save it");
    train_flags.value(train, "--train", "train_path", "Training data file");
    add_model_flags(train, train_flags);
    add_data_flags(train, train_flags);

    auto* eval = app.add_subcommand("eval", "Score a saved model on a test set");
    eval_flags.value(eval, "--model", "model_path", "Model file written by train");
    eval_flags.value(eval, "--test", "test_path", "Test data file");
    add_data_flags(eval, eval_flags);

    auto* cv = app.add_subcommand("cv", "k-fold cross-validation");
    cv_flags.value(cv, "--data", "data_path", "Dataset file");
    cv_flags.value(cv, "--folds", "folds", "Number of folds k");
    cv_flags.value(cv, "--fold-file", "fold_file", "Explicit folds, one line of test indices each");
    add_model_flags(cv, cv_flags);
    add_data_flags(cv, cv_flags);

    auto* bench = app.add_subcommand("bench", "Per-block training time on a stream");
    bench_flags.value(bench, "--train", "train_path", "Training data file");
    bench_flags.value(bench, "--arrival-interval", "arrival_interval",
                      "Seconds between block arrivals; reports real-time feasibility");
    add_model_flags(bench, bench_flags);
    add_data_flags(bench, bench_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (train->parsed()) {
            osmlelm::cmd_train(train_flags.build(config_file), std::cout);
        } else if (eval->parsed()) {
            osmlelm::cmd_eval(eval_flags.build(config_file), std::cout);
        } else if (cv->parsed()) {
            osmlelm::cmd_cv(cv_flags.build(config_file), std::cout);
        } else if (bench->parsed()) {
            osmlelm::cmd_bench(bench_flags.build(config_file), std::cout);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return osmlelm::exit_code_for(e);
    }
    return 0;
}

#include "osmlelm/hidden_layer.hpp"

#include <cmath>
#include <random>

#include "osmlelm/error.hpp"

namespace osmlelm {

std::string_view to_string(Activation a) noexcept {
    switch (a) {
        case Activation::sigmoid: return "sigmoid";
        case Activation::sine: return "sine";
        case Activation::hardlim: return "hardlim";
    }
    return "sigmoid";
}

Activation parse_activation(std::string_view tag) {
    if (tag == "sigmoid") return Activation::sigmoid;
    if (tag == "sine" || tag == "sin") return Activation::sine;
    if (tag == "hardlim" || tag == "hard-limit") return Activation::hardlim;
    throw ConfigError("unknown activation '" + std::string(tag) + "' (sigmoid|sine|hardlim)");
}

double activate(Activation a, double z) noexcept {
    switch (a) {
        case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::sine: return std::sin(z);
        case Activation::hardlim: return z >= 0.0 ? 1.0 : 0.0;
    }
    return 0.0;
}

HiddenLayer::HiddenLayer(Matrix weights, std::vector<double> biases, Activation activation)
    : weights_(std::move(weights)), biases_(std::move(biases)), activation_(activation) {
    if (biases_.size() != weights_.rows()) {
        throw DimensionError("hidden layer: " + std::to_string(biases_.size()) + " biases for " +
                             std::to_string(weights_.rows()) + " neurons");
    }
}

HiddenLayer init_hidden(std::size_t input_dim, std::size_t hidden_count, Activation activation,
                        std::uint64_t seed) {
    if (input_dim == 0 || hidden_count == 0) {
        throw ConfigError("init_hidden: input_dim and hidden_count must be >= 1 (got " +
                          std::to_string(input_dim) + ", " + std::to_string(hidden_count) + ")");
    }
    std::mt19937_64 rng(seed);
    // 53 random mantissa bits -> [0, 1); spelled out so the stream does not
    // depend on the standard library's distribution implementation.
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    Matrix weights(hidden_count, input_dim);
    for (double& w : weights.values()) w = 2.0 * unit() - 1.0;
    std::vector<double> biases(hidden_count);
    for (double& b : biases) b = unit();
    return HiddenLayer(std::move(weights), std::move(biases), activation);
}

Matrix hidden_output(const HiddenLayer& layer, const Matrix& x) {
    if (x.cols() != layer.input_dim()) {
        throw DimensionError("hidden_output: input has " + std::to_string(x.cols()) +
                             " features, layer expects " + std::to_string(layer.input_dim()));
    }
    const auto& w = layer.weights();
    const auto& b = layer.biases();
    Matrix h(x.rows(), layer.hidden_count());
    for (std::size_t j = 0; j < x.rows(); ++j) {
        const auto xj = x.row(j);
        auto hj = h.row(j);
        for (std::size_t i = 0; i < hj.size(); ++i) {
            const auto wi = w.row(i);
            double z = 0.0;
            for (std::size_t d = 0; d < xj.size(); ++d) z += wi[d] * xj[d];
            hj[i] = activate(layer.activation(), z + b[i]);
        }
    }
    return h;
}

}  // namespace osmlelm

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "osmlelm/matrix.hpp"

namespace osmlelm {

enum class Activation { sigmoid, sine, hardlim };

std::string_view to_string(Activation a) noexcept;
/// Accepts "sigmoid", "sine", "hardlim" (also "hard-limit").
Activation parse_activation(std::string_view tag);

double activate(Activation a, double z) noexcept;

/// Random input layer of a single-hidden-layer network. Weights and biases
/// are fixed once constructed; only the output weights are ever learned.
class HiddenLayer {
public:
    HiddenLayer() = default;
    /// weights is hidden_count x input_dim, one row per hidden neuron.
    HiddenLayer(Matrix weights, std::vector<double> biases, Activation activation);

    std::size_t input_dim() const noexcept { return weights_.cols(); }
    std::size_t hidden_count() const noexcept { return weights_.rows(); }
    Activation activation() const noexcept { return activation_; }
    const Matrix& weights() const noexcept { return weights_; }
    const std::vector<double>& biases() const noexcept { return biases_; }

    friend bool operator==(const HiddenLayer&, const HiddenLayer&) = default;

private:
    Matrix weights_;
    std::vector<double> biases_;
    Activation activation_ = Activation::sigmoid;
};

/// Weights uniform on [-1, 1], biases uniform on [0, 1], drawn in that order
/// (weights row by row, then biases) from a 64-bit Mersenne twister.
HiddenLayer init_hidden(std::size_t input_dim, std::size_t hidden_count,
                        Activation activation, std::uint64_t seed);

/// N x Ñ matrix with entry (j, i) = g(w_i · x_j + b_i).
Matrix hidden_output(const HiddenLayer& layer, const Matrix& x);

}  // namespace osmlelm

#pragma once

#include <cstddef>

#include "osmlelm/hidden_layer.hpp"
#include "osmlelm/matrix.hpp"

namespace osmlelm {

/// Trained state of the online sequential multi-label ELM.
///
/// `m` is the running inverse (HᵀH + ridge·I)⁻¹ over every sample absorbed so
/// far and `beta` the matching least-squares output weights. Targets are
/// bipolar (-1/+1); `threshold` is applied to raw outputs when decoding.
struct OselmModel {
    HiddenLayer hidden;
    Matrix m;
    Matrix beta;
    double threshold = 0.0;
    double ridge = 0.0;
    std::size_t samples_seen = 0;
    std::size_t blocks_seen = 0;

    std::size_t input_dim() const noexcept { return hidden.input_dim(); }
    std::size_t hidden_count() const noexcept { return hidden.hidden_count(); }
    std::size_t label_count() const noexcept { return beta.cols(); }
    bool initialized() const noexcept { return blocks_seen > 0; }

    friend bool operator==(const OselmModel&, const OselmModel&) = default;
};

/// Batch initialization on the first block: m = (H₀ᵀH₀ + ridge·I)⁻¹,
/// beta = m·H₀ᵀ·Y₀. With ridge = 0 the block needs at least Ñ rows, otherwise
/// NumericalError is raised.
OselmModel init_phase(const HiddenLayer& layer, const Matrix& x0, const Matrix& y0,
                      double ridge = 0.0);

/// Absorbs one block of samples by recursive least squares. A single row uses
/// the rank-one Sherman-Morrison form; larger blocks use the Woodbury form
/// with a B x B solve.
void update(OselmModel& model, const Matrix& x, const Matrix& y);

/// Same as update() on precomputed hidden-layer outputs (B x Ñ).
void update_hidden(OselmModel& model, const Matrix& h, const Matrix& y);

/// Raw regression outputs H·beta, N x M.
Matrix predict_raw(const OselmModel& model, const Matrix& x);

}  // namespace osmlelm

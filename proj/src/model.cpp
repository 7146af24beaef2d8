#include "osmlelm/model.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "osmlelm/error.hpp"
#include "osmlelm/numerics.hpp"

namespace osmlelm {
namespace {

void require_bipolar(const Matrix& y, const char* op) {
    for (double v : y.values()) {
        if (v != 1.0 && v != -1.0) {
            throw DataError(std::string(op) + ": targets must be bipolar (-1/+1), found " +
                            std::to_string(v));
        }
    }
}

void symmetrize(Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = avg;
            m(j, i) = avg;
        }
    }
}

// y := m·x for a vector x.
std::vector<double> mat_vec(const Matrix& m, std::span<const double> x) {
    std::vector<double> y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        const auto mi = m.row(i);
        double s = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) s += mi[k] * x[k];
        y[i] = s;
    }
    return y;
}

void rank_one_update(Matrix& m, Matrix& beta, std::span<const double> h,
                     std::span<const double> y) {
    const std::size_t n = m.rows();

    const std::vector<double> mh = mat_vec(m, h);
    double h_mh = 0.0;
    for (std::size_t i = 0; i < n; ++i) h_mh += h[i] * mh[i];
    const double denom = 1.0 + h_mh;
    if (!(denom > 0.0)) {
        throw NumericalError("update: 1 + hᵀMh = " + std::to_string(denom) +
                             " <= 0, M lost positive definiteness");
    }

    // M_{k+1} = M_k - (M_k h)(M_k h)ᵀ / (1 + hᵀ M_k h); M_k is symmetric so
    // M_k h hᵀ M_k is the outer product of M_k h with itself.
    for (std::size_t i = 0; i < n; ++i) {
        auto mi = m.row(i);
        for (std::size_t j = 0; j < n; ++j) mi[j] -= mh[i] * mh[j] / denom;
    }

    // β_{k+1} = β_k + M_{k+1} h (yᵀ - hᵀ β_k)
    std::vector<double> residual(beta.cols());
    for (std::size_t l = 0; l < beta.cols(); ++l) {
        double pred = 0.0;
        for (std::size_t i = 0; i < n; ++i) pred += h[i] * beta(i, l);
        residual[l] = y[l] - pred;
    }
    const std::vector<double> gain = mat_vec(m, h);
    for (std::size_t i = 0; i < n; ++i) {
        auto bi = beta.row(i);
        for (std::size_t l = 0; l < bi.size(); ++l) bi[l] += gain[i] * residual[l];
    }
}

void block_update(Matrix& m, Matrix& beta, const Matrix& h, const Matrix& y) {
    const std::size_t b = h.rows();
    const Matrix hm = matmul(h, m);  // H M, B x Ñ; (H M)ᵀ = M Hᵀ

    Matrix k = Matrix::identity(b);
    for (std::size_t i = 0; i < b; ++i) {
        const auto hmi = hm.row(i);
        for (std::size_t j = 0; j < b; ++j) {
            const auto hj = h.row(j);
            double s = 0.0;
            for (std::size_t r = 0; r < hj.size(); ++r) s += hmi[r] * hj[r];
            k(i, j) += s;
        }
    }
    symmetrize(k);

    Matrix gain;
    try {
        gain = solve_spd(k, hm);  // (I + H M Hᵀ)⁻¹ H M
    } catch (const NumericalError& e) {
        throw NumericalError(std::string("update: block system I + HMHᵀ broke down: ") + e.what());
    }
    const Matrix correction = matmul_at_b(hm, gain);  // M Hᵀ (I + H M Hᵀ)⁻¹ H M
    auto mv = m.values();
    const auto cv = correction.values();
    for (std::size_t i = 0; i < mv.size(); ++i) mv[i] -= cv[i];
    symmetrize(m);

    Matrix residual = y;
    const Matrix fitted = matmul(h, beta);
    auto rv = residual.values();
    const auto fv = fitted.values();
    for (std::size_t i = 0; i < rv.size(); ++i) rv[i] -= fv[i];

    const Matrix step = matmul(m, matmul_at_b(h, residual));
    auto bv = beta.values();
    const auto sv = step.values();
    for (std::size_t i = 0; i < bv.size(); ++i) bv[i] += sv[i];
}

}  // namespace

OselmModel init_phase(const HiddenLayer& layer, const Matrix& x0, const Matrix& y0, double ridge) {
    if (x0.rows() == 0) throw DimensionError("init_phase: empty initial block");
    if (y0.rows() != x0.rows()) {
        throw DimensionError("init_phase: " + std::to_string(x0.rows()) + " samples but " +
                             std::to_string(y0.rows()) + " target rows");
    }
    if (y0.cols() == 0) throw DimensionError("init_phase: targets have no label columns");
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
        throw ConfigError("init_phase: ridge must be a finite value >= 0");
    }
    require_bipolar(y0, "init_phase");

    const Matrix h0 = hidden_output(layer, x0);
    if (h0.rows() < h0.cols() && ridge == 0.0) {
        throw NumericalError("init_phase: initial block has " + std::to_string(h0.rows()) +
                             " samples but the network has " + std::to_string(h0.cols()) +
                             " hidden neurons; H₀ᵀH₀ is singular (use ridge > 0 or a larger block)");
    }
    Matrix gram = matmul_at_b(h0, h0);
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) += ridge;

    OselmModel model;
    model.hidden = layer;
    model.ridge = ridge;
    model.m = inverse_spd(gram);
    model.beta = matmul(model.m, matmul_at_b(h0, y0));
    model.samples_seen = x0.rows();
    model.blocks_seen = 1;
    return model;
}

void update_hidden(OselmModel& model, const Matrix& h, const Matrix& y) {
    if (!model.initialized()) throw ConfigError("update: model has not been initialized");
    if (h.rows() == 0) throw DimensionError("update: empty block");
    if (h.cols() != model.hidden_count()) {
        throw DimensionError("update: hidden outputs " + h.shape_string() + " do not match " +
                             std::to_string(model.hidden_count()) + " hidden neurons");
    }
    if (y.rows() != h.rows() || y.cols() != model.label_count()) {
        throw DimensionError("update: targets " + y.shape_string() + ", expected " +
                             std::to_string(h.rows()) + "x" + std::to_string(model.label_count()));
    }
    require_bipolar(y, "update");

    // Work on copies so a breakdown leaves the model untouched.
    Matrix m = model.m;
    Matrix beta = model.beta;
    if (h.rows() == 1) {
        rank_one_update(m, beta, h.row(0), y.row(0));
    } else {
        block_update(m, beta, h, y);
    }
    if (!m.all_finite() || !beta.all_finite()) {
        throw NumericalError("update: non-finite model state");
    }
    model.m = std::move(m);
    model.beta = std::move(beta);
    model.samples_seen += h.rows();
    model.blocks_seen += 1;
}

void update(OselmModel& model, const Matrix& x, const Matrix& y) {
    if (!model.initialized()) throw ConfigError("update: model has not been initialized");
    if (x.cols() != model.input_dim()) {
        throw DimensionError("update: input has " + std::to_string(x.cols()) +
                             " features, model expects " + std::to_string(model.input_dim()));
    }
    update_hidden(model, hidden_output(model.hidden, x), y);
}

Matrix predict_raw(const OselmModel& model, const Matrix& x) {
    if (!model.initialized()) throw ConfigError("predict_raw: model has not been initialized");
    return matmul(hidden_output(model.hidden, x), model.beta);
}

}  // namespace osmlelm

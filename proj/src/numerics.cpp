#include "osmlelm/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "osmlelm/error.hpp"

namespace osmlelm {
namespace {

constexpr double kSymmetryTolerance = 1e-10;
constexpr double kPivotTolerance = 1e-12;

void require_finite(const Matrix& m, const char* op) {
    if (!m.all_finite()) throw NumericalError(std::string(op) + ": non-finite result");
}

// Lower-triangular Cholesky factor, row-major, upper part left at zero.
Matrix cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    double max_diag = 0.0;
    for (std::size_t i = 0; i < n; ++i) max_diag = std::max(max_diag, a(i, i));
    if (!(max_diag > 0.0)) {
        throw NumericalError("solve_spd: matrix is singular or indefinite (no positive diagonal)");
    }
    const double tol = kPivotTolerance * max_diag;

    Matrix l(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto li = l.row(i);
        for (std::size_t j = 0; j <= i; ++j) {
            const auto lj = l.row(j);
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
            if (i == j) {
                if (!(s > tol)) {
                    throw NumericalError("solve_spd: matrix is singular or indefinite (pivot " +
                                         std::to_string(i) + " = " + std::to_string(s) + ")");
                }
                li[i] = std::sqrt(s);
            } else {
                li[j] = s / lj[j];
            }
        }
    }
    return l;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: cannot multiply " + a.shape_string() + " by " +
                             b.shape_string());
    }
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        auto ci = c.row(i);
        const auto ai = a.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = ai[k];
            if (aik == 0.0) continue;
            const auto bk = b.row(k);
            for (std::size_t j = 0; j < bk.size(); ++j) ci[j] += aik * bk[j];
        }
    }
    require_finite(c, "matmul");
    return c;
}

Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw DimensionError("matmul_at_b: cannot multiply transpose of " + a.shape_string() +
                             " by " + b.shape_string());
    }
    Matrix c(a.cols(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const auto ar = a.row(r);
        const auto br = b.row(r);
        for (std::size_t i = 0; i < ar.size(); ++i) {
            const double ari = ar[i];
            if (ari == 0.0) continue;
            auto ci = c.row(i);
            for (std::size_t j = 0; j < br.size(); ++j) ci[j] += ari * br[j];
        }
    }
    require_finite(c, "matmul_at_b");
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

Matrix solve_spd(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols()) {
        throw DimensionError("solve_spd: matrix " + a.shape_string() + " is not square");
    }
    if (b.rows() != a.rows()) {
        throw DimensionError("solve_spd: right-hand side " + b.shape_string() +
                             " does not match " + a.shape_string());
    }
    const std::size_t n = a.rows();
    const double scale = a.max_abs();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(a(i, j) - a(j, i)) > kSymmetryTolerance * scale) {
                throw NumericalError("solve_spd: matrix is not symmetric at (" + std::to_string(i) +
                                     ", " + std::to_string(j) + ")");
            }
        }
    }
    const Matrix l = cholesky(a);

    // L·Y = B, then Lᵀ·X = Y, one row of the right-hand side at a time.
    Matrix x = b;
    for (std::size_t i = 0; i < n; ++i) {
        auto xi = x.row(i);
        const auto li = l.row(i);
        for (std::size_t k = 0; k < i; ++k) {
            const double lik = li[k];
            const auto xk = x.row(k);
            for (std::size_t j = 0; j < xi.size(); ++j) xi[j] -= lik * xk[j];
        }
        for (double& v : xi) v /= li[i];
    }
    for (std::size_t i = n; i-- > 0;) {
        auto xi = x.row(i);
        for (std::size_t k = i + 1; k < n; ++k) {
            const double lki = l(k, i);
            const auto xk = x.row(k);
            for (std::size_t j = 0; j < xi.size(); ++j) xi[j] -= lki * xk[j];
        }
        for (double& v : xi) v /= l(i, i);
    }
    require_finite(x, "solve_spd");
    return x;
}

Matrix inverse_spd(const Matrix& a) {
    Matrix inv = solve_spd(a, Matrix::identity(a.rows()));
    for (std::size_t i = 0; i < inv.rows(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            const double avg = 0.5 * (inv(i, j) + inv(j, i));
            inv(i, j) = avg;
            inv(j, i) = avg;
        }
    }
    return inv;
}

Matrix pinv_normal(const Matrix& h, double ridge) {
    if (!(ridge >= 0.0) || !std::isfinite(ridge)) {
        throw ConfigError("pinv_normal: ridge must be a finite value >= 0");
    }
    if (h.rows() < h.cols() && ridge == 0.0) {
        throw NumericalError("pinv_normal: " + h.shape_string() +
                             " has fewer rows than columns, HᵀH is singular (use ridge > 0)");
    }
    Matrix gram = matmul_at_b(h, h);
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) += ridge;
    return solve_spd(gram, transpose(h));
}

}  // namespace osmlelm

#pragma once

#include "osmlelm/matrix.hpp"

namespace osmlelm {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

/// aᵀ·b without materializing the transpose.
Matrix matmul_at_b(const Matrix& a, const Matrix& b);

/// Solves a·X = b for symmetric positive-definite a by Cholesky factorization.
///
/// a must be square and symmetric to 1e-10 relative to its largest entry.
/// A pivot at or below 1e-12 times the largest diagonal entry is treated as
/// singular and raises NumericalError.
Matrix solve_spd(const Matrix& a, const Matrix& b);

/// Inverse of a symmetric positive-definite matrix, symmetrized on output.
Matrix inverse_spd(const Matrix& a);

/// (HᵀH + ridge·I)⁻¹Hᵀ. With ridge = 0 and full column rank this is the
/// Moore-Penrose pseudoinverse. Rank deficiency raises NumericalError; callers
/// may retry with a positive ridge.
Matrix pinv_normal(const Matrix& h, double ridge = 0.0);

}  // namespace osmlelm

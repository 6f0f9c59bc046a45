#pragma once

#include <span>

#include "hadamard/matrix.hpp"

namespace hadamard {

/// Entrywise product. Throws ShapeMismatch / TagMismatch.
Matrix hadamard_product(const Matrix& a, const Matrix& b);

/// Entrywise integer power, exact for rational matrices.
Matrix hadamard_power(const Matrix& a, unsigned d);

/// (|a_ij|^d) for real d > 0, always returned as a float matrix, 0^d = 0.
Matrix abs_hadamard_power(const Matrix& a, double d);

Matrix entrywise_abs(const Matrix& a);

/// X^T X.
Matrix gramian(const Matrix& x);

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix add(const Matrix& a, const Matrix& b);

/// a * diag(signs). Signs are applied exactly under either tag.
Matrix scale_columns(const Matrix& a, std::span<const int> signs);

/// Adds the same value to every entry; the constant is converted to the
/// matrix's tag (exactly, for rational matrices).
Matrix add_constant(const Matrix& a, double c);

/// u v^T for column vectors u, v of a common tag.
Matrix outer(const Matrix& u, const Matrix& v);

double max_abs_entry(const Matrix& a);

}  // namespace hadamard

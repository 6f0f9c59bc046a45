#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "hadamard/matrix.hpp"

namespace hadamard {

struct AbsoluteTolerance {
    double value = 0.0;
};

/// Threshold = factor * sigma_max. An unset factor resolves to
/// max(rows, cols) * machine epsilon.
struct RelativeTolerance {
    std::optional<double> factor;
};

using RankTolerance = std::variant<AbsoluteTolerance, RelativeTolerance>;

double resolve_tolerance(const RankTolerance& policy, std::size_t rows, std::size_t cols,
                         double sigma_max);

enum class RankMethod { ExactElimination, SingularValues };

struct RankReport {
    std::size_t rank = 0;
    RankMethod method = RankMethod::ExactElimination;
    double tolerance = 0.0;
    std::optional<std::vector<double>> singular_values;  // descending
};

/// Fraction-free (Bareiss) elimination with full pivoting on the integer
/// matrix obtained by clearing row denominators. Rational input only.
RankReport rank_exact(const Matrix& a);

/// Numerical rank from singular values. Float input only.
RankReport rank_float(const Matrix& a, const RankTolerance& policy = RelativeTolerance{});

/// rank_exact for rational matrices, rank_float with the default policy otherwise.
std::size_t rank_of(const Matrix& a);

/// Descending singular values of a float matrix (rational input is converted).
std::vector<double> singular_values(const Matrix& a);

/// sigma_max / sigma_min of a square matrix; +infinity when the matrix is
/// numerically singular under the default rank tolerance.
double condition_number(const Matrix& a);

/// sigma_max / sigma_min without the singularity cutoff (infinity only when
/// sigma_min is exactly zero).
double raw_condition_number(const Matrix& a);

/// Float: eigenvalues >= -tol. Rational: exact symmetric elimination, tol
/// ignored except for the symmetry check.
bool is_psd(const Matrix& a, double tol = 0.0);

/// Positive definite: PSD and full rank.
bool is_positive_definite(const Matrix& a, double tol = 0.0);

/// Basis of the right null space, one column vector per element. Rational
/// input yields an exact basis (reduced echelon form); float input yields
/// right singular vectors under the default rank tolerance.
std::vector<Matrix> null_space(const Matrix& a);

/// True when the columns are linearly independent: exact for rational
/// input; for float input each column is scaled to unit norm and the
/// default rank tolerance is applied. A zero column is always dependent.
bool columns_independent(const Matrix& a);

/// Exact determinant by Bareiss elimination. Rational square input only.
Rational determinant_exact(const Matrix& a);

}  // namespace hadamard

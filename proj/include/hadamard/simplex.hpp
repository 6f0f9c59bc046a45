#pragma once

#include <cstddef>
#include <vector>

#include "hadamard/matrix.hpp"
#include "hadamard/rational.hpp"

namespace hadamard {

/// maximize c^T x  subject to  A x = b, x >= 0.
template <typename T>
struct LinearProgram {
    Dense<T> a;
    std::vector<T> b;
    std::vector<T> c;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

template <typename T>
struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<T> x;
    T value{};
    std::size_t pivots = 0;
};

/// Dense two-phase tableau simplex with Bland's rule for both the entering
/// and the leaving variable. Columns that already form a unit vector with a
/// nonnegative right-hand side seed the starting basis; the remaining rows
/// get artificials. `epsilon` is the zero threshold (0 for exact scalars).
/// Throws SimplexCycling once `max_pivots` is exceeded (0 picks a bound from
/// the problem size).
template <typename T>
LpSolution<T> simplex_solve(const LinearProgram<T>& lp, const T& epsilon = T(0), std::size_t max_pivots = 0);

extern template LpSolution<double> simplex_solve(const LinearProgram<double>&, const double&, std::size_t);
extern template LpSolution<Rational> simplex_solve(const LinearProgram<Rational>&, const Rational&, std::size_t);

}  // namespace hadamard

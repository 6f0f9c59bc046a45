#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hadamard/matrix.hpp"
#include "hadamard/rank.hpp"
#include "hadamard/rational.hpp"

namespace hadamard {

inline constexpr std::uint64_t kMaxFamilySize = 1'000'000;
inline constexpr std::size_t kMaxGeneralPositionVectors = 20;
inline constexpr std::size_t kPrimeTableSize = 25;

/// Column multisets l1 <= ... <= ld over m columns, lexicographic order.
std::vector<std::vector<std::size_t>> column_multisets(std::size_t m, unsigned d);

/// One column A_l1 o ... o A_ld per multiset, in column_multisets order.
/// The result keeps the input's scalar tag.
Matrix hadamard_family(const Matrix& a, unsigned d);

struct GeneralPositionReport {
    unsigned order_d = 1;
    std::size_t family_size = 0;
    bool in_general_position = true;
    std::optional<std::vector<std::size_t>> witness;
    // Smallest |det| (product of singular values for non-square subsets)
    // over the tested subsets.
    double min_abs_determinant = 0.0;
};

/// Checks that every min(n, count) columns of `vectors` are independent.
/// Rational input is decided exactly. Float subsets are tested with columns
/// scaled to unit norm under the default rank tolerance. `order_d` is only
/// recorded in the report.
GeneralPositionReport general_position_check(const Matrix& vectors, unsigned order_d = 1);

/// Entry (i, j) = exp(i * sqrt(p_j)), 0-based i, p_j the j-th prime.
Matrix prime_gp_matrix(std::size_t n, std::size_t m);

/// C * D with C (n x r), D (r x m) uniform on [-1, 1] from mt19937_64(seed).
/// Redraws until the float rank is r, at most 10 attempts.
Matrix random_rank_r(std::size_t n, std::size_t m, std::size_t r, std::uint64_t seed);

/// min{C(r+d-1, d), n, m}, 0 when r = 0.
std::uint64_t generic_rank_formula(std::size_t r, unsigned d, std::size_t n, std::size_t m);

struct GenericRankCheck {
    std::uint64_t expected = 0;
    std::size_t computed = 0;
    bool match() const { return expected == computed; }
};

GenericRankCheck generic_rank_check(std::size_t n, std::size_t m, std::size_t r, unsigned d,
                                    std::uint64_t seed, const RankTolerance& policy = RelativeTolerance{});
bool verify_generic_rank(std::size_t n, std::size_t m, std::size_t r, unsigned d, std::uint64_t seed);

/// Smallest d >= 1 with C(n+d-1, d) >= m. InvalidProblem when n = 1 < m,
/// where no such d exists.
unsigned min_shattering_degree(unsigned n, const BigInt& m);
unsigned min_shattering_degree(unsigned n);  // m = 2^n

/// Smallest d >= 1 with (d+1)^(r-1) >= n (r-1)!, which guarantees
/// C(r+d-1, d) >= n. CapExceeded when d does not fit an unsigned.
unsigned sufficient_degree_bound(unsigned r, std::uint64_t n);

struct SweepRecord {
    double exponent_d = 0.0;
    std::size_t rank = 0;
    double condition = 0.0;      // +inf when rank < dimension
    double raw_condition = 0.0;  // sigma_max / sigma_min, no cutoff
};

/// Rank and condition number of |a|^{od} at every grid point, in grid
/// order. The condition is +inf exactly when `policy` finds the power rank
/// deficient. Points are evaluated on up to `threads` worker threads
/// (0 = hardware concurrency).
std::vector<SweepRecord> noninteger_sweep(const Matrix& a, const std::vector<double>& d_grid,
                                          const RankTolerance& policy = RelativeTolerance{}, unsigned threads = 0);

/// d_min, d_min + step, ... up to d_max, snapped to 1e-9. With `refine`,
/// k +- 0.05 j (j = 1..4) is added around every integer k in range. Sorted,
/// duplicates removed.
std::vector<double> sweep_grid(double d_min, double d_max, double step, bool refine = false);

enum class Fixture { Boolean3HatGramian, FibonacciHankel5, XorFeatures };

Fixture fixture_from_name(std::string_view name);
std::string_view fixture_name(Fixture f);
std::vector<std::string_view> fixture_names();

/// Exact rational fixtures.
Matrix builtin_fixture(Fixture f);
Matrix builtin_fixture(std::string_view name);

}  // namespace hadamard

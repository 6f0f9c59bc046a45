#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hadamard/matrix.hpp"

namespace hadamard {

inline constexpr unsigned kMaxBinaryBits = 16;
inline constexpr unsigned kMaxExactBooleanBits = 8;
inline constexpr std::size_t kMaxKruskalColumns = 20;

/// The n x 2^n matrix whose column j holds the binary digits of j, least
/// significant bit in row 0. Column 0 is the zero vector.
struct BooleanDesign {
    unsigned n = 0;
    Matrix x_matrix;
    std::optional<Matrix> gramian_cache;  // filled for n <= kMaxExactBooleanBits
};

BooleanDesign build_binary_matrix(unsigned n);

/// sum_{p=1}^{min(d,n)} C(n,p); equals 2^n - 1 once d >= n.
std::uint64_t theoretical_boolean_rank(unsigned n, unsigned d);

struct BooleanRankRow {
    unsigned n = 0;
    unsigned d = 0;
    std::uint64_t theoretical = 0;
    std::uint64_t computed = 0;
    bool match() const { return theoretical == computed; }
};

/// Exact rank of (X^T X)^{od} next to the closed form. n <= 8.
BooleanRankRow boolean_rank_row(unsigned n, unsigned d);
bool verify_boolean_rank(unsigned n, unsigned d);

/// 0 with a zero column, otherwise the largest k such that every k columns
/// are independent. Refuses more than kMaxKruskalColumns columns.
std::size_t kruskal_rank(const Matrix& a);

/// rank(a) when rank(a) < 2, otherwise the number of distinct lines spanned
/// by the nonzero columns.
std::size_t hadamard_power_rank(const Matrix& a);

struct KruskalHadamardRanks {
    std::size_t kruskal_rank = 0;
    std::size_t hadamard_power_rank = 0;
};

KruskalHadamardRanks kruskal_hadamard_ranks(const Matrix& a);

/// Empirical check of the two Kruskal/Hadamard-power-rank statements for a
/// PSD n x n matrix over d = 1..n.
struct HornYangReport {
    std::size_t kruskal_rank = 0;
    std::size_t hadamard_power_rank = 0;
    std::vector<std::size_t> ranks;         // ranks[d-1] = rank A^{od}
    std::vector<bool> positive_definite;    // positive_definite[d-1]
    bool verdict_a = false;  // k_A >= 2  <=>  A^{od} PD for every checked d >= n-1
    bool verdict_b = false;  // rank A^{od} = h_A for every checked d >= max(h_A-1, 1)
};

HornYangReport verify_horn_yang(const Matrix& a);

}  // namespace hadamard

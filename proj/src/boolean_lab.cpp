#include "hadamard/boolean_lab.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "combinations.hpp"
#include "hadamard/error.hpp"
#include "hadamard/matrix_ops.hpp"
#include "hadamard/rank.hpp"

namespace hadamard {

namespace {

// Rational: divide by the first nonzero entry to get a canonical point on
// the line. Returns nullopt for the zero column.
std::optional<std::vector<Rational>> projective_key(const Dense<Rational>& d, std::size_t j) {
    std::size_t lead = 0;
    while (lead < d.rows() && d(lead, j) == 0) ++lead;
    if (lead == d.rows()) return std::nullopt;
    std::vector<Rational> key(d.rows());
    for (std::size_t i = 0; i < d.rows(); ++i) key[i] = d(i, j) / d(lead, j);
    return key;
}

bool float_parallel(const Dense<double>& d, std::size_t a, std::size_t b) {
    double na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < d.rows(); ++i) {
        na = std::max(na, std::fabs(d(i, a)));
        nb = std::max(nb, std::fabs(d(i, b)));
    }
    const double tol = 1e-10 * na * nb;
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t k = i + 1; k < d.rows(); ++k)
            if (std::fabs(d(i, a) * d(k, b) - d(k, a) * d(i, b)) > tol) return false;
    return true;
}

}  // namespace

BooleanDesign build_binary_matrix(unsigned n) {
    if (n == 0) throw Error(ErrorCode::CapExceeded, "bit count must be at least 1");
    if (n > kMaxBinaryBits) {
        throw Error(ErrorCode::CapExceeded,
                    "bit count " + std::to_string(n) + " exceeds cap " + std::to_string(kMaxBinaryBits));
    }
    const std::size_t m = std::size_t{1} << n;
    std::vector<Rational> entries(n * m);
    for (std::size_t j = 0; j < m; ++j)
        for (unsigned l = 0; l < n; ++l) entries[l * m + j] = static_cast<long>((j >> l) & 1u);
    BooleanDesign design{n, Matrix::from_rationals(n, m, std::move(entries)), std::nullopt};
    if (n <= kMaxExactBooleanBits) design.gramian_cache = gramian(design.x_matrix);
    return design;
}

std::uint64_t theoretical_boolean_rank(unsigned n, unsigned d) {
    if (n == 0 || d == 0) throw Error(ErrorCode::InvalidProblem, "n and d must be positive");
    if (n > 63) throw Error(ErrorCode::CapExceeded, "bit count above 63 does not fit the rank type");
    std::uint64_t total = 0;
    const unsigned top = std::min(d, n);
    for (unsigned p = 1; p <= top; ++p) total += binomial(n, p).get_ui();
    return total;
}

BooleanRankRow boolean_rank_row(unsigned n, unsigned d) {
    if (n > kMaxExactBooleanBits) {
        throw Error(ErrorCode::CapExceeded, "exact Boolean rank check is capped at n = " +
                                                std::to_string(kMaxExactBooleanBits));
    }
    const BooleanDesign design = build_binary_matrix(n);
    BooleanRankRow row{n, d, theoretical_boolean_rank(n, d), 0};
    row.computed = rank_exact(hadamard_power(*design.gramian_cache, d)).rank;
    return row;
}

bool verify_boolean_rank(unsigned n, unsigned d) {
    return boolean_rank_row(n, d).match();
}

std::size_t kruskal_rank(const Matrix& a) {
    if (a.cols() > kMaxKruskalColumns) {
        throw Error(ErrorCode::CapExceeded, "Kruskal rank is capped at " + std::to_string(kMaxKruskalColumns) +
                                                " columns, got " + std::to_string(a.cols()));
    }
    for (std::size_t j = 0; j < a.cols(); ++j)
        if (a.column_is_zero(j)) return 0;
    const std::size_t top = std::min(a.rows(), a.cols());
    for (std::size_t k = 2; k <= top; ++k) {
        const bool all_independent = detail::for_each_combination(
            a.cols(), k, [&](std::span<const std::size_t> cols) { return columns_independent(a.select_columns(cols)); });
        if (!all_independent) return k - 1;
    }
    return top;
}

std::size_t hadamard_power_rank(const Matrix& a) {
    const std::size_t r = rank_of(a);
    if (r < 2) return r;
    std::vector<std::size_t> representatives;
    if (a.is_rational()) {
        std::vector<std::vector<Rational>> keys;
        for (std::size_t j = 0; j < a.cols(); ++j) {
            auto key = projective_key(a.rationals(), j);
            if (!key) continue;
            if (std::find(keys.begin(), keys.end(), *key) == keys.end()) keys.push_back(std::move(*key));
        }
        return keys.size();
    }
    const auto& d = a.floats();
    for (std::size_t j = 0; j < a.cols(); ++j) {
        if (a.column_is_zero(j)) continue;
        const bool seen = std::any_of(representatives.begin(), representatives.end(),
                                      [&](std::size_t rep) { return float_parallel(d, rep, j); });
        if (!seen) representatives.push_back(j);
    }
    return representatives.size();
}

KruskalHadamardRanks kruskal_hadamard_ranks(const Matrix& a) {
    return {kruskal_rank(a), hadamard_power_rank(a)};
}

HornYangReport verify_horn_yang(const Matrix& a) {
    if (!a.is_square()) throw Error(ErrorCode::NotSquare, "expected a square PSD matrix");
    if (a.rows() < 2) throw Error(ErrorCode::ShapeMismatch, "expected n >= 2");
    const double tol = a.is_float() ? 1e-12 * std::max(1.0, max_abs_entry(a)) : 0.0;
    if (!is_psd(a, tol)) throw Error(ErrorCode::NotPSD, "matrix is not positive semidefinite");

    const std::size_t n = a.rows();
    HornYangReport report;
    report.kruskal_rank = kruskal_rank(a);
    report.hadamard_power_rank = hadamard_power_rank(a);
    for (std::size_t d = 1; d <= n; ++d) {
        const std::size_t r = rank_of(hadamard_power(a, static_cast<unsigned>(d)));
        report.ranks.push_back(r);
        // Hadamard powers of a PSD matrix stay PSD, so PD means full rank.
        report.positive_definite.push_back(r == n);
    }
    bool all_pd = true;
    for (std::size_t d = std::max<std::size_t>(n - 1, 1); d <= n; ++d) all_pd = all_pd && report.positive_definite[d - 1];
    report.verdict_a = (report.kruskal_rank >= 2) == all_pd;

    const std::size_t h = report.hadamard_power_rank;
    bool stable = true;
    for (std::size_t d = std::max<std::size_t>(h, 2) - 1; d <= n; ++d) stable = stable && report.ranks[d - 1] == h;
    report.verdict_b = stable;
    return report;
}

}  // namespace hadamard

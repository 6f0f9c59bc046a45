#include "hadamard/generic_lab.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "combinations.hpp"
#include "hadamard/error.hpp"
#include "hadamard/matrix_ops.hpp"
#include "hadamard/rank.hpp"

namespace hadamard {

namespace {

constexpr std::array<unsigned, kPrimeTableSize> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41,
                                                            43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97};

double volume(const Matrix& sub) {
    double product = 1.0;
    for (double s : singular_values(sub)) product *= s;
    return product;
}

template <typename T>
Dense<T> family_columns(const Dense<T>& a, const std::vector<std::vector<std::size_t>>& sets) {
    Dense<T> out(a.rows(), sets.size());
    for (std::size_t k = 0; k < sets.size(); ++k) {
        for (std::size_t i = 0; i < a.rows(); ++i) {
            T v = a(i, sets[k][0]);
            for (std::size_t t = 1; t < sets[k].size(); ++t) v *= a(i, sets[k][t]);
            out(i, k) = v;
        }
    }
    return out;
}

double snap(double x) { return std::round(x * 1e9) / 1e9; }

}  // namespace

std::vector<std::vector<std::size_t>> column_multisets(std::size_t m, unsigned d) {
    if (d == 0) throw Error(ErrorCode::NonPositiveExponent, "family order must be at least 1");
    if (m == 0) return {};
    const BigInt count = binomial(m + d - 1, d);
    if (count > kMaxFamilySize) {
        throw Error(ErrorCode::FamilyTooLarge,
                    "family of size " + count.get_str() + " exceeds cap " + std::to_string(kMaxFamilySize));
    }
    std::vector<std::vector<std::size_t>> out;
    out.reserve(count.get_ui());
    std::vector<std::size_t> cur(d, 0);
    while (true) {
        out.push_back(cur);
        std::size_t i = d;
        while (i > 0 && cur[i - 1] == m - 1) --i;
        if (i == 0) break;
        ++cur[i - 1];
        for (std::size_t j = i; j < d; ++j) cur[j] = cur[i - 1];
    }
    return out;
}

Matrix hadamard_family(const Matrix& a, unsigned d) {
    const auto sets = column_multisets(a.cols(), d);
    if (a.is_float()) return Matrix(family_columns(a.floats(), sets));
    return Matrix(family_columns(a.rationals(), sets));
}

GeneralPositionReport general_position_check(const Matrix& vectors, unsigned order_d) {
    const std::size_t n = vectors.rows();
    const std::size_t count = vectors.cols();
    if (count > n && count > kMaxGeneralPositionVectors) {
        throw Error(ErrorCode::CapExceeded, "general position check of " + std::to_string(count) +
                                                " vectors in dimension " + std::to_string(n) + " exceeds cap " +
                                                std::to_string(kMaxGeneralPositionVectors));
    }
    GeneralPositionReport report;
    report.order_d = order_d;
    report.family_size = count;
    report.min_abs_determinant = INFINITY;
    const std::size_t k = std::min(n, count);
    detail::for_each_combination(count, k, [&](std::span<const std::size_t> cols) {
        const Matrix sub = vectors.select_columns(cols);
        double det = 0.0;
        if (sub.is_rational() && sub.is_square()) {
            det = std::fabs(determinant_exact(sub).get_d());
        } else {
            det = volume(sub);
        }
        report.min_abs_determinant = std::min(report.min_abs_determinant, det);
        if (!columns_independent(sub)) {
            report.in_general_position = false;
            report.witness = std::vector<std::size_t>(cols.begin(), cols.end());
            return false;
        }
        return true;
    });
    return report;
}

Matrix prime_gp_matrix(std::size_t n, std::size_t m) {
    if (n == 0 || m == 0) throw Error(ErrorCode::ShapeMismatch, "prime matrix needs n, m >= 1");
    if (m > kPrimeTableSize) {
        throw Error(ErrorCode::CapExceeded, "prime matrix supports at most " + std::to_string(kPrimeTableSize) +
                                                " columns, got " + std::to_string(m));
    }
    std::vector<double> entries(n * m);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            entries[i * m + j] = std::exp(static_cast<double>(i) * std::sqrt(static_cast<double>(kPrimes[j])));
    return Matrix::from_floats(n, m, std::move(entries));
}

Matrix random_rank_r(std::size_t n, std::size_t m, std::size_t r, std::uint64_t seed) {
    if (n == 0 || m == 0 || r == 0 || r > std::min(n, m)) {
        throw Error(ErrorCode::InvalidProblem, "need 1 <= r <= min(n, m)");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    for (int attempt = 0; attempt < 10; ++attempt) {
        std::vector<double> c(n * r), d(r * m);
        for (auto& v : c) v = uniform(rng);
        for (auto& v : d) v = uniform(rng);
        Matrix product = multiply(Matrix::from_floats(n, r, std::move(c)), Matrix::from_floats(r, m, std::move(d)));
        if (rank_float(product).rank == r) return product;
    }
    throw Error(ErrorCode::RankDeficientDraw, "10 draws in a row came out rank deficient");
}

std::uint64_t generic_rank_formula(std::size_t r, unsigned d, std::size_t n, std::size_t m) {
    if (d == 0) throw Error(ErrorCode::NonPositiveExponent, "d must be at least 1");
    if (r == 0) return 0;
    BigInt value = binomial(r + d - 1, d);
    const BigInt cap = static_cast<unsigned long>(std::min(n, m));
    if (value > cap) value = cap;
    return value.get_ui();
}

GenericRankCheck generic_rank_check(std::size_t n, std::size_t m, std::size_t r, unsigned d, std::uint64_t seed,
                                    const RankTolerance& policy) {
    GenericRankCheck check;
    check.expected = generic_rank_formula(r, d, n, m);
    check.computed = rank_float(hadamard_power(random_rank_r(n, m, r, seed), d), policy).rank;
    return check;
}

bool verify_generic_rank(std::size_t n, std::size_t m, std::size_t r, unsigned d, std::uint64_t seed) {
    return generic_rank_check(n, m, r, d, seed).match();
}

unsigned min_shattering_degree(unsigned n, const BigInt& m) {
    if (n == 0) throw Error(ErrorCode::InvalidProblem, "n must be at least 1");
    if (n == 1 && m > 1) throw Error(ErrorCode::InvalidProblem, "with n = 1 every degree gives dimension 1");
    // C(n+d-1, d) from C(n+d-2, d-1) by one multiply and an exact divide.
    BigInt value = n;
    unsigned d = 1;
    while (value < m) {
        ++d;
        value *= n + d - 1;
        mpz_divexact_ui(value.get_mpz_t(), value.get_mpz_t(), d);
    }
    return d;
}

unsigned min_shattering_degree(unsigned n) {
    BigInt m;
    mpz_ui_pow_ui(m.get_mpz_t(), 2, n);
    return min_shattering_degree(n, m);
}

unsigned sufficient_degree_bound(unsigned r, std::uint64_t n) {
    if (r < 2) throw Error(ErrorCode::InvalidProblem, "r must be at least 2");
    if (n == 0) throw Error(ErrorCode::InvalidProblem, "n must be at least 1");
    BigInt target = static_cast<unsigned long>(n);
    for (unsigned k = 2; k < r; ++k) target *= k;
    // Smallest integer root >= target^(1/(r-1)).
    BigInt root, power;
    mpz_root(root.get_mpz_t(), target.get_mpz_t(), r - 1);
    mpz_pow_ui(power.get_mpz_t(), root.get_mpz_t(), r - 1);
    if (power < target) ++root;
    if (!root.fits_uint_p()) throw Error(ErrorCode::CapExceeded, "degree bound does not fit an unsigned");
    unsigned d = std::max(static_cast<unsigned>(root.get_ui()) - 1, 1u);
    while (binomial(r + d - 1, d) < static_cast<unsigned long>(n)) ++d;
    return d;
}

std::vector<SweepRecord> noninteger_sweep(const Matrix& a, const std::vector<double>& d_grid,
                                          const RankTolerance& policy, unsigned threads) {
    if (!a.is_square()) throw Error(ErrorCode::NotSquare, "sweep needs a square matrix");
    std::vector<SweepRecord> records(d_grid.size());
    auto evaluate = [&](std::size_t k) {
        const Matrix power = abs_hadamard_power(a, d_grid[k]);
        const std::size_t rank = rank_float(power, policy).rank;
        const double raw = raw_condition_number(power);
        records[k] = {d_grid[k], rank, rank < power.rows() ? INFINITY : raw, raw};
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, d_grid.size()));
    if (threads <= 1) {
        for (std::size_t k = 0; k < d_grid.size(); ++k) evaluate(k);
        return records;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t k = next++; k < d_grid.size(); k = next++) evaluate(k);
                } catch (...) {
                    failures[t] = std::current_exception();
                    next = d_grid.size();
                }
            });
        }
    }
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);
    return records;
}

std::vector<double> sweep_grid(double d_min, double d_max, double step, bool refine) {
    if (!(d_min > 0.0) || !std::isfinite(d_max) || d_max < d_min) {
        throw Error(ErrorCode::InvalidProblem, "grid needs 0 < d_min <= d_max");
    }
    if (!(step > 0.0)) throw Error(ErrorCode::InvalidProblem, "grid step must be positive");
    const double span = (d_max - d_min) / step;
    if (span > 1e6) throw Error(ErrorCode::CapExceeded, "grid would exceed 10^6 points");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9));
    for (std::size_t k = 0; k <= count; ++k) grid.push_back(snap(d_min + static_cast<double>(k) * step));
    if (refine) {
        for (double k = std::ceil(d_min); k <= d_max; k += 1.0) {
            for (int j = -4; j <= 4; ++j) {
                const double x = snap(k + 0.05 * j);
                if (x >= d_min && x <= d_max) grid.push_back(x);
            }
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

Fixture fixture_from_name(std::string_view name) {
    if (name == "boolean3_hat_gramian") return Fixture::Boolean3HatGramian;
    if (name == "fibonacci_hankel_5") return Fixture::FibonacciHankel5;
    if (name == "xor_features") return Fixture::XorFeatures;
    throw Error(ErrorCode::UnknownFixture, "unknown fixture '" + std::string(name) + "'");
}

std::string_view fixture_name(Fixture f) {
    switch (f) {
        case Fixture::Boolean3HatGramian: return "boolean3_hat_gramian";
        case Fixture::FibonacciHankel5: return "fibonacci_hankel_5";
        case Fixture::XorFeatures: return "xor_features";
    }
    return "";
}

std::vector<std::string_view> fixture_names() {
    return {"boolean3_hat_gramian", "fibonacci_hankel_5", "xor_features"};
}

Matrix builtin_fixture(Fixture f) {
    switch (f) {
        case Fixture::Boolean3HatGramian: {
            // Binary digits of 1..7, least significant bit first.
            std::vector<Rational> x(3 * 7);
            for (std::size_t j = 0; j < 7; ++j)
                for (std::size_t l = 0; l < 3; ++l) x[l * 7 + j] = static_cast<long>(((j + 1) >> l) & 1u);
            return gramian(Matrix::from_rationals(3, 7, std::move(x)));
        }
        case Fixture::FibonacciHankel5: {
            const long fib[] = {1, 2, 3, 5, 8, 13, 21, 34, 55};
            std::vector<Rational> h(25);
            for (std::size_t i = 0; i < 5; ++i)
                for (std::size_t j = 0; j < 5; ++j) h[i * 5 + j] = fib[i + j];
            return Matrix::from_rationals(5, 5, std::move(h));
        }
        case Fixture::XorFeatures:
            return Matrix::rational_rows({{0, 1, 0, 1}, {0, 0, 1, 1}});
    }
    throw Error(ErrorCode::UnknownFixture, "unknown fixture");
}

Matrix builtin_fixture(std::string_view name) { return builtin_fixture(fixture_from_name(name)); }

}  // namespace hadamard

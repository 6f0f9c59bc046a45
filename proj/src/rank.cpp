#include "hadamard/rank.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hadamard/error.hpp"

namespace hadamard {

namespace {

constexpr double kEpsilon = std::numeric_limits<double>::epsilon();
// Above this size Jacobi SVD gets slow; divide and conquer is used instead.
constexpr std::size_t kJacobiLimit = 64;

Eigen::MatrixXd to_eigen(const Dense<double>& d) {
    Eigen::MatrixXd out(d.rows(), d.cols());
    for (std::size_t i = 0; i < d.rows(); ++i)
        for (std::size_t j = 0; j < d.cols(); ++j) out(i, j) = d(i, j);
    return out;
}

void require_finite(const Dense<double>& d) {
    for (double v : d.data()) {
        if (!std::isfinite(v)) throw Error(ErrorCode::NumericalFailure, "matrix has non-finite entries");
    }
}

struct Svd {
    Eigen::VectorXd sigma;
    Eigen::MatrixXd v;  // empty unless requested
};

Svd compute_svd(const Dense<double>& d, bool want_v) {
    require_finite(d);
    const Eigen::MatrixXd a = to_eigen(d);
    const unsigned options = want_v ? static_cast<unsigned>(Eigen::ComputeFullV) : 0u;
    Svd out;
    if (std::min(d.rows(), d.cols()) <= kJacobiLimit) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, options);
        out.sigma = svd.singularValues();
        if (want_v) out.v = svd.matrixV();
    } else {
        Eigen::BDCSVD<Eigen::MatrixXd> svd(a, options);
        if (svd.info() != Eigen::Success) {
            throw Error(ErrorCode::NumericalFailure, "singular value iteration did not converge");
        }
        out.sigma = svd.singularValues();
        if (want_v) out.v = svd.matrixV();
    }
    for (Eigen::Index k = 0; k < out.sigma.size(); ++k) {
        if (!std::isfinite(out.sigma(k))) {
            throw Error(ErrorCode::NumericalFailure, "singular value iteration produced non-finite values");
        }
    }
    return out;
}

std::size_t count_above(const Eigen::VectorXd& sigma, double tol) {
    std::size_t r = 0;
    for (Eigen::Index k = 0; k < sigma.size(); ++k)
        if (sigma(k) > tol) ++r;
    return r;
}

double default_tolerance(std::size_t rows, std::size_t cols, double sigma_max) {
    return static_cast<double>(std::max(rows, cols)) * kEpsilon * sigma_max;
}

// Multiplies each row by the lcm of its denominators.
Dense<BigInt> clear_denominators(const Dense<Rational>& r) {
    Dense<BigInt> out(r.rows(), r.cols(), BigInt(0));
    for (std::size_t i = 0; i < r.rows(); ++i) {
        BigInt l = 1;
        for (std::size_t j = 0; j < r.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < r.cols(); ++j) {
            BigInt num = r(i, j).get_num();
            BigInt den = r(i, j).get_den();
            out(i, j) = num * (l / den);
        }
    }
    return out;
}

struct BareissResult {
    std::size_t rank = 0;
    int sign = 1;  // parity of the row/column swaps
};

// In-place fraction-free elimination. After step k every entry of the
// trailing block is a (k+1)x(k+1) minor of the input, so divisions by the
// previous pivot are exact. Full pivoting picks the nonzero entry with the
// fewest limbs. For square full-rank input m(n-1,n-1) * sign is the
// determinant.
BareissResult bareiss(Dense<BigInt>& m) {
    const std::size_t rows = m.rows();
    const std::size_t cols = m.cols();
    const std::size_t steps = std::min(rows, cols);
    BareissResult result;
    BigInt prev = 1;
    BigInt t;
    for (std::size_t k = 0; k < steps; ++k) {
        std::size_t pi = rows, pj = cols;
        std::size_t best = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = k; i < rows && best > 1; ++i) {
            for (std::size_t j = k; j < cols; ++j) {
                const mpz_srcptr e = m(i, j).get_mpz_t();
                if (mpz_sgn(e) == 0) continue;
                const std::size_t size = mpz_size(e);
                if (size < best) {
                    best = size;
                    pi = i;
                    pj = j;
                    if (size <= 1) break;
                }
            }
        }
        if (pi == rows) {
            result.rank = k;
            return result;
        }
        if (pi != k) {
            m.swap_rows(pi, k);
            result.sign = -result.sign;
        }
        if (pj != k) {
            m.swap_cols(pj, k);
            result.sign = -result.sign;
        }
        const mpz_srcptr pivot = m(k, k).get_mpz_t();
        for (std::size_t i = k + 1; i < rows; ++i) {
            const mpz_srcptr lead = m(i, k).get_mpz_t();
            const bool lead_zero = mpz_sgn(lead) == 0;
            for (std::size_t j = k + 1; j < cols; ++j) {
                mpz_ptr e = m(i, j).get_mpz_t();
                mpz_mul(t.get_mpz_t(), e, pivot);
                if (!lead_zero) mpz_submul(t.get_mpz_t(), lead, m(k, j).get_mpz_t());
                mpz_divexact(e, t.get_mpz_t(), prev.get_mpz_t());
            }
            m(i, k) = 0;
        }
        prev = m(k, k);
    }
    result.rank = steps;
    return result;
}

template <typename T>
bool symmetric_within(const Dense<T>& d, double tol) {
    for (std::size_t i = 0; i < d.rows(); ++i) {
        for (std::size_t j = i + 1; j < d.cols(); ++j) {
            if constexpr (std::is_same_v<T, double>) {
                if (std::fabs(d(i, j) - d(j, i)) > tol) return false;
            } else {
                if (d(i, j) != d(j, i)) return false;
            }
        }
    }
    return true;
}

void require_square_symmetric(const Matrix& a, double tol) {
    if (!a.is_square()) throw Error(ErrorCode::NotSquare, "PSD check needs a square matrix");
    const bool symmetric = a.is_float() ? symmetric_within(a.floats(), tol) : symmetric_within(a.rationals(), tol);
    if (!symmetric) throw Error(ErrorCode::NotSymmetric, "PSD check needs a symmetric matrix");
}

// Symmetric elimination: S is PSD iff some diagonal pivot is positive and
// its Schur complement is PSD, or all diagonals vanish and S is zero.
bool exact_psd(Dense<Rational> s) {
    const std::size_t n = s.rows();
    std::vector<bool> active(n, true);
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t p = n;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            if (s(i, i) < 0) return false;
            if (p == n && s(i, i) > 0) p = i;
        }
        if (p == n) {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (active[i] && active[j] && s(i, j) != 0) return false;
            return true;
        }
        active[p] = false;
        const Rational pivot = s(p, p);
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i] || s(i, p) == 0) continue;
            const Rational f = s(i, p) / pivot;
            for (std::size_t j = 0; j < n; ++j) {
                if (active[j]) s(i, j) -= f * s(p, j);
            }
        }
    }
    return true;
}

// Reduced row echelon form; returns pivot column per pivot row.
std::vector<std::size_t> rref(Dense<Rational>& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t p = row;
        while (p < m.rows() && m(p, col) == 0) ++p;
        if (p == m.rows()) continue;
        m.swap_rows(p, row);
        const Rational inv = 1 / m(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m(i, col) == 0) continue;
            const Rational f = m(i, col);
            for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

}  // namespace

double resolve_tolerance(const RankTolerance& policy, std::size_t rows, std::size_t cols, double sigma_max) {
    if (const auto* abs = std::get_if<AbsoluteTolerance>(&policy)) return abs->value;
    const auto& rel = std::get<RelativeTolerance>(policy);
    if (rel.factor) return *rel.factor * sigma_max;
    return default_tolerance(rows, cols, sigma_max);
}

RankReport rank_exact(const Matrix& a) {
    if (!a.is_rational()) throw Error(ErrorCode::WrongScalarTag, "rank_exact needs a rational matrix");
    Dense<BigInt> work = clear_denominators(a.rationals());
    RankReport report;
    report.rank = bareiss(work).rank;
    report.method = RankMethod::ExactElimination;
    report.tolerance = 0.0;
    return report;
}

RankReport rank_float(const Matrix& a, const RankTolerance& policy) {
    if (!a.is_float()) throw Error(ErrorCode::WrongScalarTag, "rank_float needs a float matrix");
    const Svd svd = compute_svd(a.floats(), false);
    const double sigma_max = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
    RankReport report;
    report.method = RankMethod::SingularValues;
    report.tolerance = resolve_tolerance(policy, a.rows(), a.cols(), sigma_max);
    if (report.tolerance < 0.0) throw Error(ErrorCode::InvalidProblem, "rank tolerance must be nonnegative");
    report.rank = count_above(svd.sigma, report.tolerance);
    report.singular_values = std::vector<double>(svd.sigma.data(), svd.sigma.data() + svd.sigma.size());
    return report;
}

std::size_t rank_of(const Matrix& a) {
    return a.is_rational() ? rank_exact(a).rank : rank_float(a).rank;
}

std::vector<double> singular_values(const Matrix& a) {
    const Matrix f = a.to_float();
    const Svd svd = compute_svd(f.floats(), false);
    return {svd.sigma.data(), svd.sigma.data() + svd.sigma.size()};
}

double condition_number(const Matrix& a) {
    if (!a.is_square()) throw Error(ErrorCode::NotSquare, "condition number needs a square matrix");
    const std::vector<double> sigma = singular_values(a);
    const double tol = default_tolerance(a.rows(), a.cols(), sigma.front());
    if (!(sigma.back() > tol) || sigma.back() < std::numeric_limits<double>::min()) {
        return std::numeric_limits<double>::infinity();
    }
    return sigma.front() / sigma.back();
}

double raw_condition_number(const Matrix& a) {
    if (!a.is_square()) throw Error(ErrorCode::NotSquare, "condition number needs a square matrix");
    const std::vector<double> sigma = singular_values(a);
    if (sigma.back() == 0.0) return std::numeric_limits<double>::infinity();
    return sigma.front() / sigma.back();
}

bool is_psd(const Matrix& a, double tol) {
    require_square_symmetric(a, tol);
    if (a.is_rational()) return exact_psd(a.rationals());
    require_finite(a.floats());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(to_eigen(a.floats()), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorCode::NumericalFailure, "eigenvalue iteration failed");
    return eig.eigenvalues().minCoeff() >= -tol;
}

bool is_positive_definite(const Matrix& a, double tol) {
    return is_psd(a, tol) && rank_of(a) == a.rows();
}

std::vector<Matrix> null_space(const Matrix& a) {
    std::vector<Matrix> basis;
    if (a.is_rational()) {
        Dense<Rational> r = a.rationals();
        const std::vector<std::size_t> pivots = rref(r);
        std::vector<bool> is_pivot(a.cols(), false);
        for (std::size_t c : pivots) is_pivot[c] = true;
        for (std::size_t free = 0; free < a.cols(); ++free) {
            if (is_pivot[free]) continue;
            std::vector<Rational> v(a.cols(), Rational(0));
            v[free] = 1;
            for (std::size_t row = 0; row < pivots.size(); ++row) v[pivots[row]] = -r(row, free);
            basis.push_back(Matrix::column_vector(std::span<const Rational>(v)));
        }
        return basis;
    }
    const Svd svd = compute_svd(a.floats(), true);
    const double sigma_max = svd.sigma.size() > 0 ? svd.sigma(0) : 0.0;
    const std::size_t r = count_above(svd.sigma, default_tolerance(a.rows(), a.cols(), sigma_max));
    for (std::size_t k = r; k < a.cols(); ++k) {
        std::vector<double> v(a.cols());
        for (std::size_t i = 0; i < a.cols(); ++i) v[i] = svd.v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
        basis.push_back(Matrix::column_vector(std::span<const double>(v)));
    }
    return basis;
}

bool columns_independent(const Matrix& a) {
    if (a.cols() > a.rows()) return false;
    if (a.is_rational()) return rank_exact(a).rank == a.cols();
    Dense<double> d = a.floats();
    for (std::size_t j = 0; j < d.cols(); ++j) {
        double norm = 0.0;
        for (std::size_t i = 0; i < d.rows(); ++i) norm = std::hypot(norm, d(i, j));
        if (norm == 0.0) return false;
        for (std::size_t i = 0; i < d.rows(); ++i) d(i, j) /= norm;
    }
    return rank_float(Matrix(std::move(d))).rank == a.cols();
}

Rational determinant_exact(const Matrix& a) {
    if (!a.is_rational()) throw Error(ErrorCode::WrongScalarTag, "determinant_exact needs a rational matrix");
    if (!a.is_square()) throw Error(ErrorCode::NotSquare, "determinant needs a square matrix");
    const auto& r = a.rationals();
    // Row scaling by l_i multiplies the determinant by l_i.
    Rational scale = 1;
    for (std::size_t i = 0; i < r.rows(); ++i) {
        BigInt l = 1;
        for (std::size_t j = 0; j < r.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r(i, j).get_den_mpz_t());
        scale *= l;
    }
    Dense<BigInt> work = clear_denominators(r);
    const BareissResult res = bareiss(work);
    if (res.rank < r.rows()) return Rational(0);
    Rational det(work(r.rows() - 1, r.cols() - 1) * res.sign);
    det /= scale;
    det.canonicalize();
    return det;
}

}  // namespace hadamard

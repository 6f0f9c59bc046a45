#include "hadamard/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "hadamard/error.hpp"

namespace hadamard {

namespace {

double magnitude(double x) { return std::fabs(x); }
Rational magnitude(const Rational& x) { return abs(x); }

template <typename T>
class Tableau {
public:
    Tableau(const LinearProgram<T>& lp, const T& eps) : eps_(eps), n_(lp.a.cols()) {
        const std::size_t rows = lp.a.rows();
        std::vector<std::optional<std::size_t>> seeded(rows);
        std::vector<bool> flip(rows, false);
        for (std::size_t i = 0; i < rows; ++i) flip[i] = lp.b[i] < T(0);

        // A column that is a unit vector (after sign flips) can start basic.
        for (std::size_t j = 0; j < n_; ++j) {
            std::optional<std::size_t> hit;
            bool unit = true;
            for (std::size_t i = 0; i < rows && unit; ++i) {
                const T v = flip[i] ? T(-lp.a(i, j)) : lp.a(i, j);
                if (v == T(0)) continue;
                if (v == T(1) && !hit) {
                    hit = i;
                } else {
                    unit = false;
                }
            }
            if (unit && hit && !seeded[*hit]) seeded[*hit] = j;
        }
        std::size_t artificials = 0;
        for (const auto& s : seeded)
            if (!s) ++artificials;

        width_ = n_ + artificials;
        t_ = Dense<T>(rows, width_ + 1);
        basis_.resize(rows);
        std::size_t next_art = n_;
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t j = 0; j < n_; ++j) t_(i, j) = flip[i] ? T(-lp.a(i, j)) : lp.a(i, j);
            t_(i, width_) = flip[i] ? T(-lp.b[i]) : lp.b[i];
            if (seeded[i]) {
                basis_[i] = *seeded[i];
            } else {
                t_(i, next_art) = T(1);
                basis_[i] = next_art++;
            }
        }
    }

    std::size_t rows() const { return basis_.size(); }
    bool is_artificial(std::size_t j) const { return j >= n_; }

    // Reduced costs and objective value for the cost vector `cost` (size width_).
    void load_objective(const std::vector<T>& cost) {
        obj_.assign(width_ + 1, T(0));
        for (std::size_t j = 0; j < width_; ++j) obj_[j] = cost[j];
        for (std::size_t i = 0; i < rows(); ++i) {
            const T& cb = cost[basis_[i]];
            if (cb == T(0)) continue;
            for (std::size_t j = 0; j <= width_; ++j)
                if (t_(i, j) != T(0)) obj_[j] -= cb * t_(i, j);
        }
        // obj_[width_] now holds -z.
    }

    T value() const { return -obj_[width_]; }

    // Runs Bland pivots until optimal; false when unbounded.
    bool optimize(bool allow_artificial, std::size_t& pivots, std::size_t max_pivots) {
        while (true) {
            std::optional<std::size_t> enter;
            for (std::size_t j = 0; j < width_; ++j) {
                if (!allow_artificial && is_artificial(j)) continue;
                if (obj_[j] > eps_) {
                    enter = j;
                    break;
                }
            }
            if (!enter) return true;
            std::optional<std::size_t> leave;
            T best{};
            for (std::size_t i = 0; i < rows(); ++i) {
                const T& piv = t_(i, *enter);
                if (!(piv > eps_)) continue;
                const T ratio = t_(i, width_) / piv;
                if (!leave || ratio < best - eps_ ||
                    (magnitude(T(ratio - best)) <= eps_ && basis_[i] < basis_[*leave])) {
                    leave = i;
                    best = ratio;
                }
            }
            if (!leave) return false;
            if (++pivots > max_pivots) {
                throw Error(ErrorCode::SimplexCycling,
                            "simplex exceeded " + std::to_string(max_pivots) + " pivots");
            }
            pivot(*leave, *enter);
        }
    }

    void pivot(std::size_t p, std::size_t q) {
        const T inv = T(1) / t_(p, q);
        for (std::size_t j = 0; j <= width_; ++j)
            if (t_(p, j) != T(0)) t_(p, j) *= inv;
        t_(p, q) = T(1);
        auto eliminate = [&](auto&& row_at) {
            const T factor = row_at(q);
            if (factor == T(0)) return;
            for (std::size_t j = 0; j <= width_; ++j)
                if (t_(p, j) != T(0)) row_at(j) -= factor * t_(p, j);
            row_at(q) = T(0);
        };
        for (std::size_t i = 0; i < rows(); ++i)
            if (i != p) eliminate([&](std::size_t j) -> T& { return t_(i, j); });
        eliminate([&](std::size_t j) -> T& { return obj_[j]; });
        basis_[p] = q;
    }

    // Pivots basic artificials out at zero level; drops rows where that is
    // impossible (they are redundant).
    void expel_artificials() {
        std::size_t i = 0;
        while (i < rows()) {
            if (!is_artificial(basis_[i])) {
                ++i;
                continue;
            }
            std::optional<std::size_t> col;
            for (std::size_t j = 0; j < n_; ++j) {
                if (magnitude(t_(i, j)) > eps_) {
                    col = j;
                    break;
                }
            }
            if (col) {
                pivot(i, *col);
                ++i;
            } else {
                drop_row(i);
            }
        }
    }

    std::vector<T> solution() const {
        std::vector<T> x(n_, T(0));
        for (std::size_t i = 0; i < rows(); ++i)
            if (!is_artificial(basis_[i])) x[basis_[i]] = t_(i, width_);
        return x;
    }

    std::size_t width() const { return width_; }

private:
    void drop_row(std::size_t r) {
        Dense<T> next(rows() - 1, width_ + 1);
        for (std::size_t i = 0, k = 0; i < rows(); ++i) {
            if (i == r) continue;
            for (std::size_t j = 0; j <= width_; ++j) next(k, j) = t_(i, j);
            ++k;
        }
        t_ = std::move(next);
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    }

    T eps_;
    std::size_t n_;
    std::size_t width_ = 0;
    Dense<T> t_;
    std::vector<T> obj_;
    std::vector<std::size_t> basis_;
};

}  // namespace

template <typename T>
LpSolution<T> simplex_solve(const LinearProgram<T>& lp, const T& epsilon, std::size_t max_pivots) {
    if (lp.b.size() != lp.a.rows() || lp.c.size() != lp.a.cols()) {
        throw Error(ErrorCode::InvalidProblem, "linear program dimensions disagree");
    }
    if (max_pivots == 0) max_pivots = std::max<std::size_t>(10000, 200 * (lp.a.rows() + lp.a.cols()));

    Tableau<T> tab(lp, epsilon);
    LpSolution<T> out;

    std::vector<T> phase1(tab.width(), T(0));
    for (std::size_t j = 0; j < tab.width(); ++j)
        if (tab.is_artificial(j)) phase1[j] = T(-1);
    tab.load_objective(phase1);
    tab.optimize(true, out.pivots, max_pivots);
    if (tab.value() < -epsilon) {
        out.status = LpStatus::Infeasible;
        return out;
    }
    tab.expel_artificials();

    std::vector<T> phase2(tab.width(), T(0));
    std::copy(lp.c.begin(), lp.c.end(), phase2.begin());
    tab.load_objective(phase2);
    if (!tab.optimize(false, out.pivots, max_pivots)) {
        out.status = LpStatus::Unbounded;
        return out;
    }
    out.status = LpStatus::Optimal;
    out.x = tab.solution();
    out.value = tab.value();
    return out;
}

template LpSolution<double> simplex_solve(const LinearProgram<double>&, const double&, std::size_t);
template LpSolution<Rational> simplex_solve(const LinearProgram<Rational>&, const Rational&, std::size_t);

}  // namespace hadamard

#include "hadamard/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "hadamard/error.hpp"
#include "hadamard/simplex.hpp"

namespace hadamard {

namespace {

void validate(const DualQP& p, const Dense<double>& q) {
    const std::size_t m = p.labels.size();
    if (q.rows() != q.cols()) throw Error(ErrorCode::InvalidProblem, "Q must be square");
    if (q.rows() != m) {
        throw Error(ErrorCode::InvalidProblem, "Q is " + std::to_string(q.rows()) + "x" + std::to_string(q.cols()) +
                                                   " but there are " + std::to_string(m) + " labels");
    }
    for (int y : p.labels)
        if (y != 1 && y != -1) throw Error(ErrorCode::InvalidProblem, "labels must be +1 or -1");
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!std::isfinite(q(i, j))) throw Error(ErrorCode::InvalidProblem, "Q has a non-finite entry");
            if (std::fabs(q(i, j) - q(j, i)) > 1e-12) throw Error(ErrorCode::InvalidProblem, "Q is not symmetric");
        }
    }
    if (!(p.kkt_tolerance > 0.0) || !(p.divergence_bound > 0.0)) {
        throw Error(ErrorCode::InvalidProblem, "tolerance and divergence bound must be positive");
    }
}

double quad_form(const Dense<double>& q, const std::vector<double>& v) {
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < v.size(); ++j) row += q(i, j) * v[j];
        total += v[i] * row;
    }
    return total;
}

std::vector<double> gradient(const Dense<double>& q, const std::vector<double>& a) {
    std::vector<double> g(a.size(), -1.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) g[i] += q(i, j) * a[j];
    return g;
}

double l1(const std::vector<double>& a) { return std::accumulate(a.begin(), a.end(), 0.0); }

std::vector<double> normalized(std::vector<double> a) {
    const double s = l1(a);
    for (auto& v : a) v /= s;
    return a;
}

// One active-set step on the face {a_k > 0}. Directions r on the face with
// Q r = 0 and y^T r = 0 raise the objective linearly at rate 1^T r. Two
// candidates are tried: the projection of the all-ones vector and of the
// recent displacement `drift` onto that null space; a nonnegative one is
// returned as a ray witness, otherwise the iterate moves along the better
// one until a coordinate reaches zero. Without such a direction the iterate
// moves towards the stationary point of the face, stopping at the boundary.
std::optional<std::vector<double>> face_step(const Dense<double>& q, const std::vector<int>& y,
                                             const std::vector<double>& drift, std::vector<double>& a) {
    const std::size_t m = a.size();
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < m; ++k)
        if (a[k] > 0.0) s.push_back(k);
    const auto n = static_cast<Eigen::Index>(s.size());
    if (n == 0) return std::nullopt;

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) kkt(i, j) = q(s[i], s[j]);
        kkt(i, n) = kkt(n, i) = y[s[i]];
    }
    const Eigen::MatrixXd stacked = kkt.leftCols(n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const Eigen::VectorXd& sigma = svd.singularValues();
    const double tol = static_cast<double>(n + 1) * std::numeric_limits<double>::epsilon() * sigma(0);
    Eigen::Index rank = 0;
    while (rank < sigma.size() && sigma(rank) > tol) ++rank;

    auto reach_along = [&](const std::vector<double>& dir) {
        double reach = INFINITY;
        for (std::size_t k = 0; k < m; ++k)
            if (dir[k] < 0.0) reach = std::min(reach, -a[k] / dir[k]);
        return reach;
    };

    std::vector<double> best;
    double best_gain = 0.0;
    if (rank < n) {
        const Eigen::MatrixXd null = svd.matrixV().rightCols(n - rank);
        Eigen::VectorXd ones = Eigen::VectorXd::Ones(n), moved(n);
        for (Eigen::Index i = 0; i < n; ++i) moved(i) = drift[s[i]];
        for (const Eigen::VectorXd* source : {&ones, &moved}) {
            const Eigen::VectorXd w = null * (null.transpose() * *source);
            const double size = w.lpNorm<1>();
            if (!(size > 0.0) || w.sum() <= 1e-12 * size) continue;
            std::vector<double> dir(m, 0.0);
            for (Eigen::Index i = 0; i < n; ++i) dir[s[i]] = w(i) / size;
            const double reach = reach_along(dir);
            if (std::isinf(reach)) return dir;
            const double gain = reach * (w.sum() / size);
            if (gain > best_gain) {
                best_gain = gain;
                best = std::move(dir);
            }
        }
    }
    double t = 0.0;
    if (!best.empty()) {
        t = reach_along(best);
    } else {
        Eigen::VectorXd rhs = Eigen::VectorXd::Ones(n + 1);
        rhs(n) = 0.0;
        const Eigen::VectorXd target = kkt.completeOrthogonalDecomposition().solve(rhs);
        best.assign(m, 0.0);
        for (Eigen::Index i = 0; i < n; ++i) best[s[i]] = target(i) - a[s[i]];
        t = std::min(1.0, reach_along(best));
    }
    for (std::size_t k = 0; k < m; ++k) a[k] = std::max(a[k] + t * best[k], 0.0);
    return std::nullopt;
}

}  // namespace

std::string_view qp_status_name(QPStatus s) {
    switch (s) {
        case QPStatus::Converged: return "Converged";
        case QPStatus::Unbounded: return "Unbounded";
        case QPStatus::IterationCap: return "IterationCap";
    }
    return "";
}

QPOutcome solve_dual_qp(const DualQP& problem) {
    const Dense<double> q =
        problem.q_matrix.is_float() ? problem.q_matrix.floats() : problem.q_matrix.to_float().floats();
    validate(problem, q);
    const std::size_t m = problem.labels.size();
    const auto& y = problem.labels;
    const std::size_t cap = problem.max_iterations ? problem.max_iterations : 100 * m * m;

    QPOutcome out;
    std::vector<double> a(m, 0.0);
    std::vector<double> g(m, -1.0);  // gradient of 1/2 a^T Q a - ||a||_1

    auto unbounded = [&](std::vector<double> witness, std::size_t it) {
        out.status = QPStatus::Unbounded;
        out.a = std::move(witness);
        out.objective = INFINITY;
        out.iterations = it;
        return out;
    };

    std::vector<double> checkpoint(m, 0.0), drift(m);
    for (std::size_t it = 0; it < cap; ++it) {
        if (it % m == m - 1) {
            for (std::size_t k = 0; k < m; ++k) drift[k] = a[k] - checkpoint[k];
            if (auto ray = face_step(q, y, drift, a)) return unbounded(std::move(*ray), it);
            checkpoint = a;
            g = gradient(q, a);
            if (l1(a) > problem.divergence_bound) return unbounded(normalized(a), it);
        }

        // Maximal violating pair over I_up = {y=+1 or a>0}, I_low = {y=-1 or a>0}.
        std::optional<std::size_t> up, low;
        for (std::size_t k = 0; k < m; ++k) {
            const double score = -y[k] * g[k];
            if ((y[k] > 0 || a[k] > 0.0) && (!up || score > -y[*up] * g[*up])) up = k;
            if ((y[k] < 0 || a[k] > 0.0) && (!low || score < -y[*low] * g[*low])) low = k;
        }
        double violation = 0.0;
        if (up && low) violation = -y[*up] * g[*up] + y[*low] * g[*low];
        if (!up || !low || violation <= problem.kkt_tolerance) {
            out.status = QPStatus::Converged;
            out.kkt_violation = std::max(violation, 0.0);
            out.iterations = it;
            out.objective = l1(a) - 0.5 * quad_form(q, a);
            out.a = std::move(a);
            return out;
        }
        const std::size_t i = *up, j = *low;
        const double curvature = q(i, i) + q(j, j) - 2.0 * y[i] * y[j] * q(i, j);
        double step = curvature > 1e-12 ? violation / curvature : INFINITY;
        if (y[i] < 0) step = std::min(step, a[i]);
        if (y[j] > 0) step = std::min(step, a[j]);
        if (std::isinf(step)) {
            std::vector<double> witness(m, 0.0);
            witness[i] += 0.5;
            witness[j] += 0.5;
            return unbounded(witness, it);
        }
        // Snap a clipped coordinate to exactly zero.
        a[i] = (y[i] < 0 && step == a[i]) ? 0.0 : a[i] + y[i] * step;
        a[j] = (y[j] > 0 && step == a[j]) ? 0.0 : a[j] - y[j] * step;
        for (std::size_t k = 0; k < m; ++k) g[k] += (q(k, i) * y[i] - q(k, j) * y[j]) * step;
        if (l1(a) > problem.divergence_bound) return unbounded(normalized(a), it + 1);
    }
    out.status = QPStatus::IterationCap;
    out.iterations = cap;
    out.objective = l1(a) - 0.5 * quad_form(q, a);
    out.a = std::move(a);
    return out;
}

namespace {

template <typename T>
LinearProgram<T> null_nonneg_program(const Dense<T>& mat, std::span<const int> labels) {
    const std::size_t m = labels.size();
    LinearProgram<T> lp;
    lp.a = Dense<T>(2 * m + 1, 2 * m);
    lp.b.assign(2 * m + 1, T(0));
    lp.c.assign(2 * m, T(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) lp.a(i, j) = mat(i, j);
    for (std::size_t j = 0; j < m; ++j) lp.a(m, j) = T(labels[j]);
    for (std::size_t i = 0; i < m; ++i) {
        lp.a(m + 1 + i, i) = T(1);
        lp.a(m + 1 + i, m + i) = T(1);
        lp.b[m + 1 + i] = T(1);
        lp.c[i] = T(1);
    }
    return lp;
}

void scale_rows(LinearProgram<double>& lp, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
        double top = 0.0;
        for (std::size_t j = 0; j < lp.a.cols(); ++j) top = std::max(top, std::fabs(lp.a(i, j)));
        if (top == 0.0) continue;
        for (std::size_t j = 0; j < lp.a.cols(); ++j) lp.a(i, j) /= top;
    }
}

}  // namespace

LPFeasibility lp_null_nonneg(const Matrix& k_times_y, std::span<const int> labels) {
    const std::size_t m = labels.size();
    if (m == 0 || k_times_y.rows() != m || k_times_y.cols() != m) {
        throw Error(ErrorCode::InvalidProblem, "expected an m x m matrix and m labels");
    }
    for (int y : labels)
        if (y != 1 && y != -1) throw Error(ErrorCode::InvalidProblem, "labels must be +1 or -1");

    LPFeasibility out;
    std::vector<double> a;
    if (k_times_y.is_rational()) {
        const auto sol = simplex_solve(null_nonneg_program(k_times_y.rationals(), labels));
        out.pivots = sol.pivots;
        if (sol.status != LpStatus::Optimal) throw Error(ErrorCode::SolverFailure, "bounded LP was not solved");
        if (sol.value * 2 <= 1) return out;
        Rational total = 0;
        for (std::size_t j = 0; j < m; ++j) total += sol.x[j];
        for (std::size_t j = 0; j < m; ++j) a.push_back(Rational(sol.x[j] / total).get_d());
    } else {
        auto lp = null_nonneg_program(k_times_y.floats(), labels);
        scale_rows(lp, m);
        const auto sol = simplex_solve(lp, 1e-9);
        out.pivots = sol.pivots;
        if (sol.status != LpStatus::Optimal) throw Error(ErrorCode::SolverFailure, "bounded LP was not solved");
        if (sol.value <= 0.5) return out;
        a.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(m));
        for (auto& v : a) v = std::max(v, 0.0);
        a = normalized(std::move(a));
    }
    out.feasible = true;
    out.certificate = std::move(a);
    return out;
}

}  // namespace hadamard

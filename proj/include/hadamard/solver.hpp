#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hadamard/matrix.hpp"

namespace hadamard {

/// maximize ||a||_1 - 1/2 a^T Q a  subject to  y^T a = 0, a >= 0.
struct DualQP {
    Matrix q_matrix;  // Y K Y, symmetric
    std::vector<int> labels;
    std::size_t max_iterations = 0;  // 0 means 100 m^2
    double kkt_tolerance = 1e-8;
    double divergence_bound = 1e8;
};

enum class QPStatus { Converged, Unbounded, IterationCap };

std::string_view qp_status_name(QPStatus s);

struct QPOutcome {
    QPStatus status = QPStatus::IterationCap;
    std::vector<double> a;  // optimum, or a unit-l1 ray witness when Unbounded
    double objective = 0.0;  // +inf when Unbounded
    std::size_t iterations = 0;
    double kkt_violation = 0.0;
};

/// Pairwise (SMO) ascent with maximal-violating-pair selection. Every m pair
/// updates an active-set step on the current support either finds a ray of
/// zero curvature (Unbounded), moves along one to the boundary, or moves
/// towards the stationary point of the face. Plain SMO only grows linearly
/// on unbounded problems and would rarely reach divergence_bound.
QPOutcome solve_dual_qp(const DualQP& problem);

struct LPFeasibility {
    bool feasible = false;
    std::optional<std::vector<double>> certificate;  // a >= 0, ||a||_1 = 1
    std::size_t pivots = 0;
};

/// Decides whether some nonzero a >= 0 has y^T a = 0 and M a = 0 by
/// maximizing sum(a) over {M a = 0, y^T a = 0, 0 <= a <= 1}. Rational input
/// is solved exactly; float rows are scaled to unit max-norm first.
LPFeasibility lp_null_nonneg(const Matrix& k_times_y, std::span<const int> labels);

}  // namespace hadamard

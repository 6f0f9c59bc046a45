#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "hadamard/matrix.hpp"

namespace hadamard {

/// Feature vectors are the columns of `features`; one +-1 label per column.
struct LabeledDataset {
    LabeledDataset(Matrix features, std::vector<int> labels);

    Matrix features;
    std::vector<int> labels;
};

/// k(v, w) = (<v, w> + offset)^degree.
struct PolynomialKernel {
    unsigned degree = 1;
    double offset = 0.0;

    void validate() const;
    double operator()(std::span<const double> v, std::span<const double> w) const;
};

struct TrainedPerceptron {
    PolynomialKernel kernel;
    Matrix support_features;
    std::vector<int> support_labels;
    std::vector<double> alpha;
    double bias = 0.0;
};

struct InfeasibleCertificate {
    std::vector<double> certificate;  // a >= 0, ||a||_1 = 1, y^T a = 0, K Y a = 0
};

struct TrainDiagnostics {
    std::size_t lp_pivots = 0;
    std::size_t qp_iterations = 0;
    double kkt_violation = 0.0;
};

struct TrainVerdict {
    std::variant<TrainedPerceptron, InfeasibleCertificate> outcome;
    TrainDiagnostics diagnostics;

    bool realized() const { return std::holds_alternative<TrainedPerceptron>(outcome); }
    const TrainedPerceptron& perceptron() const { return std::get<TrainedPerceptron>(outcome); }
    const std::vector<double>& certificate() const { return std::get<InfeasibleCertificate>(outcome).certificate; }
};

struct TrainOptions {
    double kkt_tolerance = 1e-8;
    std::size_t max_iterations = 0;  // 0 means 100 m^2
};

/// ((<x_i, x_j> + c)^d). Exact when the features are rational.
Matrix kernel_matrix(const LabeledDataset& data, const PolynomialKernel& kernel);

/// Decides feasibility with the exact LP first; on bounded problems solves
/// the dual QP and sets b = -(min_{y=+1} s_j + max_{y=-1} s_j) / 2 with
/// s_j = sum_i alpha_i y_i k(x_i, x_j), which centres the decision value
/// between the two classes. One-class data gets alpha = 0 and bias = the
/// class label.
TrainVerdict train(const LabeledDataset& data, const PolynomialKernel& kernel, const TrainOptions& options = {});

double decision_value(const TrainedPerceptron& p, std::span<const double> x);

/// +1 when the decision value is >= 0, otherwise -1.
int classify(const TrainedPerceptron& p, std::span<const double> x);

/// Truth table over {0,1}^n; entry j is f(binary digits of j), least
/// significant bit first.
struct BooleanFunction {
    unsigned n = 0;
    std::vector<int> truth_table;
};

/// '+'/'-' string of length 2^n.
BooleanFunction parse_truth_table(std::string_view text);
std::string format_truth_table(const BooleanFunction& f);

LabeledDataset boolean_dataset(const BooleanFunction& f);

TrainVerdict realize_boolean(const BooleanFunction& f, unsigned degree);

/// Smallest degree that realizes f. n <= 4.
unsigned min_realization_degree(const BooleanFunction& f);

struct ShatteringReport {
    std::size_t patterns = 0;
    std::size_t realized = 0;
    std::vector<std::vector<int>> infeasible_patterns;  // in input order

    double fraction() const { return patterns ? static_cast<double>(realized) / static_cast<double>(patterns) : 0.0; }
};

/// Every +-1 pattern of length m, pattern k taking bit j of k (1 -> +1).
std::vector<std::vector<int>> all_label_patterns(std::size_t m);
std::vector<std::vector<int>> random_label_patterns(std::size_t m, std::size_t count, std::uint64_t seed);

inline constexpr std::size_t kMaxShatteringPatterns = std::size_t{1} << 16;

/// Trains one kernel perceptron per pattern on up to `threads` workers
/// (0 = hardware concurrency).
ShatteringReport shattering_check(const Matrix& features, unsigned degree,
                                  const std::vector<std::vector<int>>& label_patterns, unsigned threads = 0);

std::string perceptron_to_json(const TrainedPerceptron& p);
TrainedPerceptron perceptron_from_json(std::string_view text);

/// Matrix text format followed by a line "labels: y1 y2 ...".
LabeledDataset read_dataset(std::istream& in);
void write_dataset(std::ostream& out, const LabeledDataset& data);

}  // namespace hadamard

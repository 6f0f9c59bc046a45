#include "hadamard/perceptron.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "hadamard/boolean_lab.hpp"
#include "hadamard/error.hpp"
#include "hadamard/matrix_io.hpp"
#include "hadamard/matrix_ops.hpp"
#include "hadamard/rational.hpp"
#include "hadamard/solver.hpp"

namespace hadamard {

namespace {

void check_labels(std::span<const int> labels, std::size_t expected) {
    if (labels.size() != expected) {
        throw Error(ErrorCode::DimensionMismatch, std::to_string(labels.size()) + " labels for " +
                                                      std::to_string(expected) + " feature columns");
    }
    for (int y : labels)
        if (y != 1 && y != -1) throw Error(ErrorCode::InvalidProblem, "labels must be +1 or -1");
}

std::vector<double> column_of(const Matrix& m, std::size_t j) {
    std::vector<double> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = m.value(i, j);
    return out;
}

}  // namespace

LabeledDataset::LabeledDataset(Matrix f, std::vector<int> y) : features(std::move(f)), labels(std::move(y)) {
    check_labels(labels, features.cols());
}

void PolynomialKernel::validate() const {
    if (degree == 0) throw Error(ErrorCode::NonPositiveExponent, "kernel degree must be at least 1");
    if (!(offset >= 0.0) || !std::isfinite(offset)) throw Error(ErrorCode::InvalidProblem, "kernel offset must be >= 0");
}

double PolynomialKernel::operator()(std::span<const double> v, std::span<const double> w) const {
    double dot = offset;
    for (std::size_t i = 0; i < v.size(); ++i) dot += v[i] * w[i];
    return std::pow(dot, static_cast<double>(degree));
}

Matrix kernel_matrix(const LabeledDataset& data, const PolynomialKernel& kernel) {
    kernel.validate();
    Matrix base = gramian(data.features);
    if (kernel.offset != 0.0) base = add_constant(base, kernel.offset);
    return hadamard_power(base, kernel.degree);
}

double decision_value(const TrainedPerceptron& p, std::span<const double> x) {
    const Matrix& xs = p.support_features;
    if (x.size() != xs.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "point has dimension " + std::to_string(x.size()) +
                                                      ", model expects " + std::to_string(xs.rows()));
    }
    double z = p.bias;
    for (std::size_t i = 0; i < xs.cols(); ++i) {
        if (p.alpha[i] == 0.0) continue;
        z += p.alpha[i] * p.support_labels[i] * p.kernel(column_of(xs, i), x);
    }
    return z;
}

int classify(const TrainedPerceptron& p, std::span<const double> x) { return decision_value(p, x) >= 0.0 ? 1 : -1; }

TrainVerdict train(const LabeledDataset& data, const PolynomialKernel& kernel, const TrainOptions& options) {
    check_labels(data.labels, data.features.cols());
    const std::vector<int>& y = data.labels;
    const std::size_t m = y.size();
    const Matrix k = kernel_matrix(data, kernel);
    const Matrix k_times_y = scale_columns(k, y);

    TrainVerdict verdict{InfeasibleCertificate{}, {}};
    const LPFeasibility lp = lp_null_nonneg(k_times_y, y);
    verdict.diagnostics.lp_pivots = lp.pivots;
    if (lp.feasible) {
        verdict.outcome = InfeasibleCertificate{*lp.certificate};
        return verdict;
    }

    DualQP qp{scale_columns(k_times_y.transpose(), y).to_float(), y};
    qp.kkt_tolerance = options.kkt_tolerance;
    qp.max_iterations = options.max_iterations;
    const QPOutcome sol = solve_dual_qp(qp);
    verdict.diagnostics.qp_iterations = sol.iterations;
    verdict.diagnostics.kkt_violation = sol.kkt_violation;
    if (sol.status != QPStatus::Converged) {
        std::ostringstream msg;
        msg << "dual QP ended " << qp_status_name(sol.status) << " after the LP found no certificate (kkt tolerance "
            << format_double(qp.kkt_tolerance) << ", final violation " << format_double(sol.kkt_violation)
            << ", LP zero threshold " << (k.is_rational() ? "exact" : "1e-9") << ")";
        throw Error(ErrorCode::SolverFailure, msg.str());
    }

    TrainedPerceptron p{kernel, data.features, y, sol.a, 0.0};
    for (auto& v : p.alpha) v = std::max(v, 0.0);

    const Matrix kf = k.to_float();
    double min_pos = std::numeric_limits<double>::infinity();
    double max_neg = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += p.alpha[i] * y[i] * kf.floats()(i, j);
        if (y[j] > 0) {
            min_pos = std::min(min_pos, s);
        } else {
            max_neg = std::max(max_neg, s);
        }
    }
    if (std::isinf(min_pos) || std::isinf(max_neg)) {
        std::fill(p.alpha.begin(), p.alpha.end(), 0.0);
        p.bias = y.front();
    } else {
        p.bias = -0.5 * (min_pos + max_neg);
    }

    for (std::size_t j = 0; j < m; ++j) {
        if (classify(p, column_of(data.features, j)) != y[j]) {
            throw Error(ErrorCode::SolverFailure,
                        "trained perceptron misclassifies training point " + std::to_string(j));
        }
    }
    verdict.outcome = std::move(p);
    return verdict;
}

BooleanFunction parse_truth_table(std::string_view text) {
    const std::size_t len = text.size();
    if (len < 2 || (len & (len - 1)) != 0) {
        throw Error(ErrorCode::ParseError, "truth table length must be 2^n with n >= 1, got " + std::to_string(len));
    }
    BooleanFunction f;
    while ((std::size_t{1} << f.n) < len) ++f.n;
    for (char c : text) {
        if (c != '+' && c != '-') throw Error(ErrorCode::ParseError, "truth table may only contain '+' and '-'");
        f.truth_table.push_back(c == '+' ? 1 : -1);
    }
    return f;
}

std::string format_truth_table(const BooleanFunction& f) {
    std::string out;
    for (int v : f.truth_table) out += v > 0 ? '+' : '-';
    return out;
}

LabeledDataset boolean_dataset(const BooleanFunction& f) {
    if (f.n > kMaxExactBooleanBits) {
        throw Error(ErrorCode::CapExceeded,
                    "Boolean realization is capped at n = " + std::to_string(kMaxExactBooleanBits));
    }
    if (f.n == 0 || f.truth_table.size() != (std::size_t{1} << f.n)) {
        throw Error(ErrorCode::DimensionMismatch, "truth table must have 2^n entries");
    }
    return LabeledDataset(build_binary_matrix(f.n).x_matrix, f.truth_table);
}

TrainVerdict realize_boolean(const BooleanFunction& f, unsigned degree) {
    return train(boolean_dataset(f), PolynomialKernel{degree, 0.0});
}

unsigned min_realization_degree(const BooleanFunction& f) {
    if (f.n > 4) throw Error(ErrorCode::CapExceeded, "minimal degree search is capped at n = 4");
    const LabeledDataset data = boolean_dataset(f);
    for (unsigned d = 1; d <= f.n; ++d)
        if (train(data, PolynomialKernel{d, 0.0}).realized()) return d;
    throw Error(ErrorCode::SolverFailure, "no degree up to n realized the truth table");
}

std::vector<std::vector<int>> all_label_patterns(std::size_t m) {
    if (m > 16) throw Error(ErrorCode::CapExceeded, "exhaustive label patterns are capped at 2^16");
    std::vector<std::vector<int>> out;
    for (std::size_t k = 0; k < (std::size_t{1} << m); ++k) {
        std::vector<int> y(m);
        for (std::size_t j = 0; j < m; ++j) y[j] = (k >> j) & 1u ? 1 : -1;
        out.push_back(std::move(y));
    }
    return out;
}

std::vector<std::vector<int>> random_label_patterns(std::size_t m, std::size_t count, std::uint64_t seed) {
    if (count > kMaxShatteringPatterns) throw Error(ErrorCode::CapExceeded, "pattern sample is capped at 2^16");
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> out(count, std::vector<int>(m));
    for (auto& y : out)
        for (auto& v : y) v = (rng() & 1u) ? 1 : -1;
    return out;
}

ShatteringReport shattering_check(const Matrix& features, unsigned degree,
                                  const std::vector<std::vector<int>>& label_patterns, unsigned threads) {
    if (label_patterns.size() > kMaxShatteringPatterns) {
        throw Error(ErrorCode::CapExceeded, "shattering check is capped at 2^16 patterns");
    }
    const PolynomialKernel kernel{degree, 0.0};
    kernel.validate();
    for (const auto& y : label_patterns) check_labels(y, features.cols());

    std::vector<char> realized(label_patterns.size(), 0);
    auto evaluate = [&](std::size_t k) {
        realized[k] = train(LabeledDataset(features, label_patterns[k]), kernel).realized() ? 1 : 0;
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, label_patterns.size()));
    if (threads <= 1) {
        for (std::size_t k = 0; k < label_patterns.size(); ++k) evaluate(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::exception_ptr> failures(threads);
        {
            std::vector<std::jthread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back([&, t] {
                    try {
                        for (std::size_t k = next++; k < label_patterns.size(); k = next++) evaluate(k);
                    } catch (...) {
                        failures[t] = std::current_exception();
                        next = label_patterns.size();
                    }
                });
            }
        }
        for (const auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    ShatteringReport report;
    report.patterns = label_patterns.size();
    for (std::size_t k = 0; k < label_patterns.size(); ++k) {
        if (realized[k]) {
            ++report.realized;
        } else {
            report.infeasible_patterns.push_back(label_patterns[k]);
        }
    }
    return report;
}

std::string perceptron_to_json(const TrainedPerceptron& p) {
    const Matrix& f = p.support_features;
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < f.rows(); ++i) {
        for (std::size_t j = 0; j < f.cols(); ++j) {
            if (f.is_float()) {
                data.push_back(f.floats()(i, j));
            } else {
                data.push_back(format_rational(f.rationals()(i, j)));
            }
        }
    }
    nlohmann::ordered_json j;
    j["degree"] = p.kernel.degree;
    j["offset"] = p.kernel.offset;
    j["features"] = {{"rows", f.rows()}, {"cols", f.cols()}, {"scalar", f.is_float() ? "float" : "rational"},
                     {"data", std::move(data)}};
    j["labels"] = p.support_labels;
    j["alpha"] = p.alpha;
    j["bias"] = p.bias;
    return j.dump(2);
}

TrainedPerceptron perceptron_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto& f = j.at("features");
        const auto rows = f.at("rows").get<std::size_t>();
        const auto cols = f.at("cols").get<std::size_t>();
        const auto& data = f.at("data");
        if (data.size() != rows * cols) throw Error(ErrorCode::ParseError, "feature data has the wrong length");
        Matrix features = Matrix::identity(1, ScalarKind::Float);
        if (f.value("scalar", std::string("float")) == "rational") {
            std::vector<Rational> entries;
            for (const auto& v : data) entries.push_back(parse_rational(v.get<std::string>()));
            features = Matrix::from_rationals(rows, cols, std::move(entries));
        } else {
            features = Matrix::from_floats(rows, cols, data.get<std::vector<double>>());
        }
        TrainedPerceptron p{PolynomialKernel{j.at("degree").get<unsigned>(), j.at("offset").get<double>()},
                            std::move(features), j.at("labels").get<std::vector<int>>(),
                            j.at("alpha").get<std::vector<double>>(), j.at("bias").get<double>()};
        p.kernel.validate();
        check_labels(p.support_labels, p.support_features.cols());
        if (p.alpha.size() != p.support_labels.size()) {
            throw Error(ErrorCode::DimensionMismatch, "alpha length does not match the label count");
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("model JSON: ") + e.what());
    }
}

LabeledDataset read_dataset(std::istream& in) {
    Matrix features = read_matrix(in);
    std::string line;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    std::istringstream row(line);
    std::string tag;
    if (!(row >> tag) || tag != "labels:") throw Error(ErrorCode::ParseError, "expected a 'labels:' line");
    std::vector<int> labels;
    std::string tok;
    while (row >> tok) {
        if (tok == "1" || tok == "+1") {
            labels.push_back(1);
        } else if (tok == "-1") {
            labels.push_back(-1);
        } else {
            throw Error(ErrorCode::ParseError, "label '" + tok + "' is not +1 or -1");
        }
    }
    return LabeledDataset(std::move(features), std::move(labels));
}

void write_dataset(std::ostream& out, const LabeledDataset& data) {
    write_matrix(out, data.features);
    out << "labels:";
    for (int y : data.labels) out << ' ' << y;
    out << '\n';
}

}  // namespace hadamard

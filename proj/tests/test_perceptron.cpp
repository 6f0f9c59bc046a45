#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "hadamard/boolean_lab.hpp"
#include "hadamard/error.hpp"
#include "hadamard/generic_lab.hpp"
#include "hadamard/matrix_ops.hpp"
#include "hadamard/perceptron.hpp"
#include "hadamard/rank.hpp"
#include "oracles.hpp"

using namespace hadamard;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorCode::SolverFailure;
}

std::vector<double> column(const Matrix& m, std::size_t j) {
    std::vector<double> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = m.value(i, j);
    return v;
}

// Every training point classified as labelled.
void expect_round_trip(const LabeledDataset& data, const TrainedPerceptron& p) {
    for (std::size_t j = 0; j < data.labels.size(); ++j)
        EXPECT_EQ(classify(p, column(data.features, j)), data.labels[j]) << "point " << j;
    double ya = 0.0;
    for (std::size_t i = 0; i < p.alpha.size(); ++i) {
        EXPECT_GE(p.alpha[i], 0.0);
        ya += p.alpha[i] * p.support_labels[i];
    }
    EXPECT_NEAR(ya, 0.0, 1e-8);
}

// Certificate constraints by direct substitution.
void expect_certificate(const LabeledDataset& data, const PolynomialKernel& kernel, const std::vector<double>& c) {
    const Matrix ky = scale_columns(kernel_matrix(data, kernel), data.labels);
    double total = 0.0, ya = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) {
        EXPECT_GE(c[j], 0.0);
        total += c[j];
        ya += data.labels[j] * c[j];
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_NEAR(ya, 0.0, 1e-9);
    for (std::size_t i = 0; i < ky.rows(); ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < c.size(); ++j) r += ky.value(i, j) * c[j];
        EXPECT_NEAR(r, 0.0, 1e-9 * std::max(1.0, max_abs_entry(ky)));
    }
}

void expect_valid(const LabeledDataset& data, const PolynomialKernel& kernel, const TrainVerdict& v) {
    if (v.realized())
        expect_round_trip(data, v.perceptron());
    else
        expect_certificate(data, kernel, v.certificate());
}

BooleanFunction table_from_bits(unsigned n, std::uint64_t bits) {
    BooleanFunction f{n, std::vector<int>(std::size_t{1} << n)};
    for (std::size_t j = 0; j < f.truth_table.size(); ++j) f.truth_table[j] = (bits >> j) & 1u ? 1 : -1;
    return f;
}

const LabeledDataset kXor{builtin_fixture(Fixture::XorFeatures), {-1, 1, 1, -1}};

}  // namespace

// ---- datasets and kernels ---------------------------------------------------

TEST(LabeledDataset, Validation) {
    EXPECT_EQ(code_of([] { LabeledDataset(Matrix::identity(2, ScalarKind::Float), {1}); }), ErrorCode::DimensionMismatch);
    EXPECT_EQ(code_of([] { LabeledDataset(Matrix::identity(2, ScalarKind::Float), {1, 0}); }), ErrorCode::InvalidProblem);
}

TEST(PolynomialKernel, EvaluatesAndValidates) {
    const std::vector<double> v{1, 2}, w{3, -1};
    EXPECT_DOUBLE_EQ((PolynomialKernel{2, 0.0})(v, w), 1.0);
    EXPECT_DOUBLE_EQ((PolynomialKernel{3, 1.5})(v, w), std::pow(2.5, 3));
    EXPECT_EQ(code_of([] { PolynomialKernel{0, 0.0}.validate(); }), ErrorCode::NonPositiveExponent);
    EXPECT_EQ(code_of([] { PolynomialKernel{1, -1.0}.validate(); }), ErrorCode::InvalidProblem);
}

TEST(KernelMatrix, Examples) {
    const LabeledDataset data(Matrix::rational_rows({{1, 2, 0}, {0, 1, 3}}), {1, -1, 1});
    EXPECT_EQ(kernel_matrix(data, {1, 0.0}), gramian(data.features));
    EXPECT_EQ(kernel_matrix(data, {1, 1.0}), add_constant(gramian(data.features), 1.0));
    EXPECT_EQ(kernel_matrix(kXor, {2, 0.0}), hadamard_power(gramian(kXor.features), 2));
    // K^{o2} Y for XOR.
    EXPECT_EQ(scale_columns(kernel_matrix(kXor, {2, 0.0}), kXor.labels),
              Matrix::rational_rows({{0, 0, 0, 0}, {0, 1, 0, -1}, {0, 0, 1, -1}, {0, 1, 1, -4}}));
    EXPECT_TRUE(kernel_matrix(data, {2, 0.5}).is_rational());
}

TEST(KernelMatrix, IsPsd) {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t m = 2 + rng() % 6;
        const LabeledDataset data(oracle::random_integer_matrix(1 + rng() % 3, m, -3, 3, rng), std::vector<int>(m, 1));
        const PolynomialKernel k{1 + static_cast<unsigned>(rng() % 4), static_cast<double>(rng() % 3) / 2.0};
        EXPECT_TRUE(is_psd(kernel_matrix(data, k)));
    }
}

// ---- training ---------------------------------------------------------------

TEST(Train, XorDegreeTwoIsRealized) {
    const TrainVerdict v = train(kXor, {2, 0.0});
    ASSERT_TRUE(v.realized());
    expect_round_trip(kXor, v.perceptron());
    EXPECT_EQ(classify(v.perceptron(), std::vector<double>{1, 0}), 1);
    EXPECT_EQ(classify(v.perceptron(), std::vector<double>{0, 0}), -1);
}

TEST(Train, XorHandParametersReproduceLabels) {
    const TrainedPerceptron p{{2, 0.0}, kXor.features, kXor.labels, {6, 4, 4, 2}, -1.0};
    for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(classify(p, column(kXor.features, j)), kXor.labels[j]);
    EXPECT_DOUBLE_EQ(decision_value(p, std::vector<double>{1, 1}), 4.0 + 4.0 - 2.0 * 4.0 - 1.0);
}

TEST(Train, XorDegreeOneIsInfeasibleAlongAllOnes) {
    const TrainVerdict v = train(kXor, {1, 0.0});
    ASSERT_FALSE(v.realized());
    for (double c : v.certificate()) EXPECT_NEAR(c, 0.25, 1e-12);
    expect_certificate(kXor, {1, 0.0}, v.certificate());
}

TEST(Train, SinglePointAndOneClass) {
    for (int label : {1, -1}) {
        const LabeledDataset one(Matrix::float_rows({{0.5}, {2.0}}), {label});
        const TrainVerdict v = train(one, {2, 0.0});
        ASSERT_TRUE(v.realized());
        EXPECT_EQ(v.perceptron().alpha, std::vector<double>{0.0});
        EXPECT_EQ(v.perceptron().bias, label);
        expect_round_trip(one, v.perceptron());

        const LabeledDataset same(Matrix::rational_rows({{0, 1, 2}, {1, 1, 0}}), {label, label, label});
        const TrainVerdict w = train(same, {1, 0.0});
        ASSERT_TRUE(w.realized());
        expect_round_trip(same, w.perceptron());
    }
}

TEST(Train, OffsetKernelsRoundTrip) {
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 2 + rng() % 6;
        std::vector<int> y(m);
        for (auto& v : y) v = rng() % 2 ? 1 : -1;
        const LabeledDataset data(oracle::random_integer_matrix(2, m, -3, 3, rng), y);
        const PolynomialKernel k{1 + static_cast<unsigned>(rng() % 3), 1.0};
        expect_valid(data, k, train(data, k));
    }
}

TEST(Train, FloatFeatures) {
    std::mt19937_64 rng(97);
    int realized = 0;
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t m = 3 + rng() % 4;
        std::vector<int> y(m);
        for (auto& v : y) v = rng() % 2 ? 1 : -1;
        const LabeledDataset data(oracle::random_float_matrix(3, m, rng), y);
        const TrainVerdict v = train(data, {2, 0.0});
        expect_valid(data, {2, 0.0}, v);
        realized += v.realized();
    }
    EXPECT_EQ(realized, 40);  // at most C(4,2) = 6 generic points in R^3
}

TEST(Train, LabelFlipSymmetry) {
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t m = 2 + rng() % 6;
        std::vector<int> y(m), flipped(m);
        for (std::size_t j = 0; j < m; ++j) {
            y[j] = rng() % 2 ? 1 : -1;
            flipped[j] = -y[j];
        }
        const Matrix x = oracle::random_integer_matrix(1 + rng() % 3, m, -2, 2, rng);
        const PolynomialKernel k{1 + static_cast<unsigned>(rng() % 3), 0.0};
        const LabeledDataset a(x, y), b(x, flipped);
        const TrainVerdict va = train(a, k), vb = train(b, k);
        EXPECT_EQ(va.realized(), vb.realized());
        expect_valid(a, k, va);
        expect_valid(b, k, vb);
    }
}

// ---- classification ---------------------------------------------------------

TEST(Classify, ZeroDecisionIsPositive) {
    const TrainedPerceptron p{{1, 0.0}, Matrix::float_rows({{1, 2}, {3, 4}}), {1, -1}, {0, 0}, 0.0};
    EXPECT_EQ(classify(p, std::vector<double>{5, -7}), 1);
    EXPECT_EQ(decision_value(p, std::vector<double>{5, -7}), 0.0);
    EXPECT_EQ(code_of([&] { classify(p, std::vector<double>{1, 2, 3}); }), ErrorCode::DimensionMismatch);
}

// ---- Boolean functions ------------------------------------------------------

TEST(BooleanFunction, TruthTableText) {
    const BooleanFunction f = parse_truth_table("-++-");
    EXPECT_EQ(f.n, 2u);
    EXPECT_EQ(f.truth_table, (std::vector<int>{-1, 1, 1, -1}));
    EXPECT_EQ(format_truth_table(f), "-++-");
    EXPECT_EQ(code_of([] { parse_truth_table("-+-"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_truth_table("-+x-"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { parse_truth_table(""); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { boolean_dataset(BooleanFunction{9, std::vector<int>(512, 1)}); }), ErrorCode::CapExceeded);
}

TEST(RealizeBoolean, Examples) {
    const BooleanFunction x = parse_truth_table("-++-");
    EXPECT_TRUE(realize_boolean(x, 2).realized());
    EXPECT_FALSE(realize_boolean(x, 1).realized());
    EXPECT_TRUE(realize_boolean(parse_truth_table("++++"), 1).realized());
    EXPECT_EQ(min_realization_degree(x), 2u);
    EXPECT_EQ(min_realization_degree(parse_truth_table("---+")), 1u);
    EXPECT_EQ(min_realization_degree(parse_truth_table("--------")), 1u);
    EXPECT_EQ(code_of([] { min_realization_degree(BooleanFunction{5, std::vector<int>(32, 1)}); }), ErrorCode::CapExceeded);
}

TEST(RealizeBoolean, TwoBitDichotomyAgainstSeparabilityOracle) {
    const auto pts = oracle::boolean_points(2);
    int infeasible = 0;
    for (std::uint64_t bits = 0; bits < 16; ++bits) {
        const BooleanFunction f = table_from_bits(2, bits);
        const TrainVerdict d1 = realize_boolean(f, 1);
        EXPECT_EQ(d1.realized(), oracle::linearly_separable(pts, f.truth_table)) << format_truth_table(f);
        expect_valid(boolean_dataset(f), {1, 0.0}, d1);
        infeasible += !d1.realized();
        const TrainVerdict d2 = realize_boolean(f, 2);
        EXPECT_TRUE(d2.realized()) << format_truth_table(f);
        expect_valid(boolean_dataset(f), {2, 0.0}, d2);
    }
    EXPECT_EQ(infeasible, 2);
}

TEST(RealizeBoolean, ThreeBitDegreeOneMatchesSeparabilityOracle) {
    const auto pts = oracle::boolean_points(3);
    for (std::uint64_t bits = 0; bits < 256; ++bits) {
        const BooleanFunction f = table_from_bits(3, bits);
        EXPECT_EQ(realize_boolean(f, 1).realized(), oracle::linearly_separable(pts, f.truth_table)) << format_truth_table(f);
    }
}

TEST(RealizeBoolean, ThreeBitRandomTablesAndParity) {
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 100; ++trial) {
        const BooleanFunction f = table_from_bits(3, rng() & 0xff);
        const TrainVerdict v = realize_boolean(f, 3);
        ASSERT_TRUE(v.realized()) << format_truth_table(f);
        expect_round_trip(boolean_dataset(f), v.perceptron());
    }
    const BooleanFunction parity = parse_truth_table("-++-+--+");
    EXPECT_FALSE(realize_boolean(parity, 1).realized());
    EXPECT_FALSE(realize_boolean(parity, 2).realized());
    EXPECT_TRUE(realize_boolean(parity, 3).realized());
    EXPECT_EQ(min_realization_degree(parity), 3u);
}

TEST(RealizeBoolean, MinimalDegreeNeverExceedsBitCount) {
    std::mt19937_64 rng(107);
    for (unsigned n = 1; n <= 4; ++n)
        for (int trial = 0; trial < 10; ++trial) {
            const BooleanFunction f = table_from_bits(n, rng());
            EXPECT_LE(min_realization_degree(f), n);
        }
}

// ---- shattering -------------------------------------------------------------

TEST(LabelPatterns, Enumeration) {
    const auto all = all_label_patterns(3);
    ASSERT_EQ(all.size(), 8u);
    EXPECT_EQ(all[0], (std::vector<int>{-1, -1, -1}));
    EXPECT_EQ(all[5], (std::vector<int>{1, -1, 1}));
    EXPECT_EQ(code_of([] { all_label_patterns(17); }), ErrorCode::CapExceeded);
    EXPECT_EQ(random_label_patterns(6, 5, 1), random_label_patterns(6, 5, 1));
    for (const auto& p : random_label_patterns(6, 20, 2)) {
        ASSERT_EQ(p.size(), 6u);
        for (int v : p) EXPECT_TRUE(v == 1 || v == -1);
    }
}

TEST(Shattering, XorFeatures) {
    const Matrix x = builtin_fixture(Fixture::XorFeatures);
    const ShatteringReport d2 = shattering_check(x, 2, all_label_patterns(4));
    EXPECT_EQ(d2.realized, 16u);
    EXPECT_DOUBLE_EQ(d2.fraction(), 1.0);
    const ShatteringReport d1 = shattering_check(x, 1, all_label_patterns(4));
    EXPECT_EQ(d1.realized, 14u);
    ASSERT_EQ(d1.infeasible_patterns.size(), 2u);
    EXPECT_EQ(d1.infeasible_patterns[0], (std::vector<int>{-1, 1, 1, -1}));
    EXPECT_EQ(d1.infeasible_patterns[1], (std::vector<int>{1, -1, -1, 1}));
}

TEST(Shattering, GenericPointsAtSufficientDegree) {
    const Matrix x = random_rank_r(3, 5, 3, 11);
    ASSERT_TRUE(general_position_check(hadamard_family(x.transpose(), 2), 2).in_general_position);
    const ShatteringReport r = shattering_check(x, 2, all_label_patterns(5));
    EXPECT_EQ(r.realized, 32u);
    EXPECT_TRUE(r.infeasible_patterns.empty());
}

TEST(Shattering, ThreadCountDoesNotChangeResult) {
    const Matrix x = build_binary_matrix(3).x_matrix;
    const auto patterns = random_label_patterns(8, 40, 5);
    const ShatteringReport one = shattering_check(x, 2, patterns, 1);
    const ShatteringReport four = shattering_check(x, 2, patterns, 4);
    EXPECT_EQ(one.realized, four.realized);
    EXPECT_EQ(one.infeasible_patterns, four.infeasible_patterns);
}

// Full-rank Boolean kernels (zero point aside) realize every pattern.
TEST(Shattering, SufficiencyByRank) {
    for (unsigned n : {2u, 3u}) {
        const BooleanDesign design = build_binary_matrix(n);
        const Matrix k = hadamard_power(*design.gramian_cache, n);
        ASSERT_EQ(rank_exact(k).rank, (std::size_t{1} << n) - 1);
        const auto patterns = n == 2 ? all_label_patterns(4) : random_label_patterns(8, 100, 109);
        EXPECT_EQ(shattering_check(design.x_matrix, n, patterns).realized, patterns.size());
    }
}

// ---- serialization ----------------------------------------------------------

TEST(Serialization, JsonRoundTripFloat) {
    std::mt19937_64 rng(113);
    const LabeledDataset data(oracle::random_float_matrix(3, 6, rng), {1, -1, 1, 1, -1, -1});
    const TrainVerdict v = train(data, {2, 0.25});
    ASSERT_TRUE(v.realized());
    const TrainedPerceptron back = perceptron_from_json(perceptron_to_json(v.perceptron()));
    EXPECT_EQ(back.kernel.degree, 2u);
    EXPECT_EQ(back.kernel.offset, 0.25);
    EXPECT_EQ(back.support_features, v.perceptron().support_features);
    EXPECT_EQ(back.support_labels, v.perceptron().support_labels);
    EXPECT_EQ(back.alpha, v.perceptron().alpha);
    EXPECT_EQ(back.bias, v.perceptron().bias);
    EXPECT_EQ(perceptron_to_json(back), perceptron_to_json(v.perceptron()));
}

TEST(Serialization, JsonRoundTripRational) {
    const TrainVerdict v = train(kXor, {2, 0.0});
    ASSERT_TRUE(v.realized());
    const TrainedPerceptron back = perceptron_from_json(perceptron_to_json(v.perceptron()));
    EXPECT_TRUE(back.support_features.is_rational());
    EXPECT_EQ(back.support_features, kXor.features);
    expect_round_trip(kXor, back);
}

TEST(Serialization, JsonErrors) {
    EXPECT_EQ(code_of([] { perceptron_from_json("{"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { perceptron_from_json("{\"degree\": 2}"); }), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { perceptron_from_json("[1, 2]"); }), ErrorCode::ParseError);
}

TEST(Serialization, DatasetText) {
    std::stringstream buf;
    write_dataset(buf, kXor);
    const LabeledDataset back = read_dataset(buf);
    EXPECT_EQ(back.features, kXor.features);
    EXPECT_EQ(back.labels, kXor.labels);

    std::istringstream bad("2 2 rational\n1 0\n0 1\nlabels: 1 3\n");
    EXPECT_EQ(code_of([&] { read_dataset(bad); }), ErrorCode::ParseError);
    std::istringstream missing("2 2 rational\n1 0\n0 1\n");
    EXPECT_EQ(code_of([&] { read_dataset(missing); }), ErrorCode::ParseError);
}

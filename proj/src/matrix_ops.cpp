#include "hadamard/matrix_ops.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hadamard/error.hpp"

namespace hadamard {

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorCode::ShapeMismatch,
                    std::string(what) + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                        " vs " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
}

void require_same_tag(const Matrix& a, const Matrix& b, const char* what) {
    if (a.kind() != b.kind()) {
        throw Error(ErrorCode::TagMismatch, std::string(what) + ": float and rational operands");
    }
}

template <typename T, typename F>
Dense<T> zip(const Dense<T>& a, const Dense<T>& b, F f) {
    Dense<T> out(a.rows(), a.cols());
    for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = f(a.data()[k], b.data()[k]);
    return out;
}

template <typename T, typename F>
Dense<T> map(const Dense<T>& a, F f) {
    Dense<T> out(a.rows(), a.cols());
    for (std::size_t k = 0; k < a.size(); ++k) out.data()[k] = f(a.data()[k]);
    return out;
}

template <typename T>
Dense<T> product(const Dense<T>& a, const Dense<T>& b) {
    Dense<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    }
    return out;
}

template <typename T>
Dense<T> gram(const Dense<T>& x) {
    const std::size_t m = x.cols();
    Dense<T> out(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i; j < m; ++j) {
            T s = 0;
            for (std::size_t l = 0; l < x.rows(); ++l) s += x(l, i) * x(l, j);
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return out;
}

}  // namespace

Matrix hadamard_product(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "hadamard_product");
    require_same_tag(a, b, "hadamard_product");
    if (a.is_float()) {
        return Matrix(zip(a.floats(), b.floats(), [](double x, double y) { return x * y; }));
    }
    return Matrix(zip(a.rationals(), b.rationals(),
                      [](const Rational& x, const Rational& y) { return Rational(x * y); }));
}

Matrix hadamard_power(const Matrix& a, unsigned d) {
    if (d == 0) throw Error(ErrorCode::NonPositiveExponent, "hadamard_power needs d >= 1");
    if (a.is_float()) {
        // std::pow keeps this bit-identical to abs_hadamard_power on |a|.
        const double e = static_cast<double>(d);
        return Matrix(map(a.floats(), [e](double x) { return std::pow(x, e); }));
    }
    return Matrix(map(a.rationals(), [d](const Rational& x) { return rational_pow(x, d); }));
}

Matrix abs_hadamard_power(const Matrix& a, double d) {
    if (!(d > 0.0) || !std::isfinite(d)) {
        throw Error(ErrorCode::NonPositiveExponent, "abs_hadamard_power needs a finite d > 0");
    }
    const Matrix f = a.to_float();
    return Matrix(map(f.floats(), [d](double x) {
        const double ax = std::fabs(x);
        return ax == 0.0 ? 0.0 : std::pow(ax, d);
    }));
}

Matrix entrywise_abs(const Matrix& a) {
    if (a.is_float()) return Matrix(map(a.floats(), [](double x) { return std::fabs(x); }));
    return Matrix(map(a.rationals(), [](const Rational& x) { return Rational(abs(x)); }));
}

Matrix gramian(const Matrix& x) {
    if (x.is_float()) return Matrix(gram(x.floats()));
    return Matrix(gram(x.rationals()));
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw Error(ErrorCode::ShapeMismatch, "multiply: inner dimensions " + std::to_string(a.cols()) +
                                                  " and " + std::to_string(b.rows()));
    }
    require_same_tag(a, b, "multiply");
    if (a.is_float()) return Matrix(product(a.floats(), b.floats()));
    return Matrix(product(a.rationals(), b.rationals()));
}

Matrix add(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "add");
    require_same_tag(a, b, "add");
    if (a.is_float()) return Matrix(zip(a.floats(), b.floats(), [](double x, double y) { return x + y; }));
    return Matrix(zip(a.rationals(), b.rationals(),
                      [](const Rational& x, const Rational& y) { return Rational(x + y); }));
}

Matrix scale_columns(const Matrix& a, std::span<const int> signs) {
    if (signs.size() != a.cols()) {
        throw Error(ErrorCode::ShapeMismatch, "scale_columns: " + std::to_string(signs.size()) +
                                                  " factors for " + std::to_string(a.cols()) + " columns");
    }
    auto negate = [&](auto out) {
        for (std::size_t i = 0; i < out.rows(); ++i)
            for (std::size_t j = 0; j < out.cols(); ++j)
                if (signs[j] < 0) out(i, j) = -out(i, j);
        return Matrix(std::move(out));
    };
    if (a.is_float()) return negate(a.floats());
    return negate(a.rationals());
}

Matrix add_constant(const Matrix& a, double c) {
    if (a.is_float()) return Matrix(map(a.floats(), [c](double x) { return x + c; }));
    const Rational rc = rational_from_double(c);
    return Matrix(map(a.rationals(), [&rc](const Rational& x) { return Rational(x + rc); }));
}

Matrix outer(const Matrix& u, const Matrix& v) {
    if (u.cols() != 1 || v.cols() != 1) throw Error(ErrorCode::ShapeMismatch, "outer expects column vectors");
    return multiply(u, v.transpose());
}

double max_abs_entry(const Matrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) best = std::max(best, std::fabs(a.value(i, j)));
    return best;
}

}  // namespace hadamard

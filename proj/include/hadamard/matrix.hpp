#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <variant>
#include <vector>

#include "hadamard/rational.hpp"

namespace hadamard {

enum class ScalarKind { Float, Rational };

/// Plain row-major storage. Used as the working buffer inside algorithms;
/// the public value type is Matrix.
template <typename T>
class Dense {
public:
    using value_type = T;

    Dense() = default;
    Dense(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Dense(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    const std::vector<T>& data() const noexcept { return data_; }
    std::vector<T>& data() noexcept { return data_; }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }
    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    bool operator==(const Dense&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

/// Immutable dense matrix whose entries are either all doubles or all exact
/// rationals. Every operation in the library returns a new Matrix.
class Matrix {
public:
    explicit Matrix(Dense<double> values);
    explicit Matrix(Dense<Rational> values);

    static Matrix from_floats(std::size_t rows, std::size_t cols, std::vector<double> entries);
    static Matrix from_rationals(std::size_t rows, std::size_t cols, std::vector<Rational> entries);
    static Matrix float_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix rational_rows(std::initializer_list<std::initializer_list<long>> rows);
    static Matrix identity(std::size_t n, ScalarKind kind);
    static Matrix zeros(std::size_t rows, std::size_t cols, ScalarKind kind);
    static Matrix column_vector(std::span<const double> entries);
    static Matrix column_vector(std::span<const Rational> entries);

    std::size_t rows() const noexcept;
    std::size_t cols() const noexcept;
    ScalarKind kind() const noexcept;
    bool is_float() const noexcept { return kind() == ScalarKind::Float; }
    bool is_rational() const noexcept { return kind() == ScalarKind::Rational; }
    bool is_square() const noexcept { return rows() == cols(); }

    /// Throws WrongScalarTag when the tag does not match.
    const Dense<double>& floats() const;
    const Dense<Rational>& rationals() const;

    double value(std::size_t i, std::size_t j) const;

    Matrix to_float() const;
    Matrix transpose() const;
    Matrix column(std::size_t j) const;
    Matrix select_columns(std::span<const std::size_t> indices) const;
    bool column_is_zero(std::size_t j) const;

    /// Exact comparison; matrices of different tags never compare equal.
    bool operator==(const Matrix& other) const;

private:
    std::variant<Dense<double>, Dense<Rational>> storage_;
};

}  // namespace hadamard

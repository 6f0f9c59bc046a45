#include "hadamard/matrix.hpp"

#include <string>

#include "hadamard/error.hpp"

namespace hadamard {

namespace {

template <typename T>
void check_shape(const Dense<T>& d) {
    if (d.rows() == 0 || d.cols() == 0) {
        throw Error(ErrorCode::ShapeMismatch, "matrix needs at least one row and one column");
    }
    if (d.size() != d.rows() * d.cols()) {
        throw Error(ErrorCode::ShapeMismatch,
                    "entry count " + std::to_string(d.size()) + " does not match " +
                        std::to_string(d.rows()) + "x" + std::to_string(d.cols()));
    }
}

template <typename T, typename Src>
Dense<T> from_nested(std::initializer_list<std::initializer_list<Src>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<T> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw Error(ErrorCode::ShapeMismatch, "ragged row list");
        for (const auto& v : row) data.emplace_back(v);
    }
    return Dense<T>(r, c, std::move(data));
}

template <typename T>
Dense<T> select(const Dense<T>& d, std::span<const std::size_t> indices) {
    Dense<T> out(d.rows(), indices.size());
    for (std::size_t i = 0; i < d.rows(); ++i) {
        for (std::size_t k = 0; k < indices.size(); ++k) {
            if (indices[k] >= d.cols()) throw Error(ErrorCode::ShapeMismatch, "column index out of range");
            out(i, k) = d(i, indices[k]);
        }
    }
    return out;
}

}  // namespace

Matrix::Matrix(Dense<double> values) : storage_(std::move(values)) {
    check_shape(std::get<Dense<double>>(storage_));
}

Matrix::Matrix(Dense<Rational> values) : storage_(std::move(values)) {
    check_shape(std::get<Dense<Rational>>(storage_));
}

Matrix Matrix::from_floats(std::size_t rows, std::size_t cols, std::vector<double> entries) {
    return Matrix(Dense<double>(rows, cols, std::move(entries)));
}

Matrix Matrix::from_rationals(std::size_t rows, std::size_t cols, std::vector<Rational> entries) {
    for (auto& e : entries) e.canonicalize();
    return Matrix(Dense<Rational>(rows, cols, std::move(entries)));
}

Matrix Matrix::float_rows(std::initializer_list<std::initializer_list<double>> rows) {
    return Matrix(from_nested<double>(rows));
}

Matrix Matrix::rational_rows(std::initializer_list<std::initializer_list<long>> rows) {
    return Matrix(from_nested<Rational>(rows));
}

Matrix Matrix::identity(std::size_t n, ScalarKind kind) {
    if (kind == ScalarKind::Float) {
        Dense<double> d(n, n, 0.0);
        for (std::size_t i = 0; i < n; ++i) d(i, i) = 1.0;
        return Matrix(std::move(d));
    }
    Dense<Rational> d(n, n, Rational(0));
    for (std::size_t i = 0; i < n; ++i) d(i, i) = 1;
    return Matrix(std::move(d));
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols, ScalarKind kind) {
    if (kind == ScalarKind::Float) return Matrix(Dense<double>(rows, cols, 0.0));
    return Matrix(Dense<Rational>(rows, cols, Rational(0)));
}

Matrix Matrix::column_vector(std::span<const double> entries) {
    return Matrix(Dense<double>(entries.size(), 1, std::vector<double>(entries.begin(), entries.end())));
}

Matrix Matrix::column_vector(std::span<const Rational> entries) {
    return Matrix(Dense<Rational>(entries.size(), 1, std::vector<Rational>(entries.begin(), entries.end())));
}

std::size_t Matrix::rows() const noexcept {
    return std::visit([](const auto& d) { return d.rows(); }, storage_);
}

std::size_t Matrix::cols() const noexcept {
    return std::visit([](const auto& d) { return d.cols(); }, storage_);
}

ScalarKind Matrix::kind() const noexcept {
    return storage_.index() == 0 ? ScalarKind::Float : ScalarKind::Rational;
}

const Dense<double>& Matrix::floats() const {
    if (const auto* d = std::get_if<Dense<double>>(&storage_)) return *d;
    throw Error(ErrorCode::WrongScalarTag, "expected a float matrix, got a rational one");
}

const Dense<Rational>& Matrix::rationals() const {
    if (const auto* d = std::get_if<Dense<Rational>>(&storage_)) return *d;
    throw Error(ErrorCode::WrongScalarTag, "expected a rational matrix, got a float one");
}

double Matrix::value(std::size_t i, std::size_t j) const {
    if (is_float()) return floats()(i, j);
    return rationals()(i, j).get_d();
}

Matrix Matrix::to_float() const {
    if (is_float()) return *this;
    const auto& r = rationals();
    Dense<double> out(r.rows(), r.cols());
    for (std::size_t k = 0; k < r.size(); ++k) out.data()[k] = r.data()[k].get_d();
    return Matrix(std::move(out));
}

Matrix Matrix::transpose() const {
    return std::visit(
        [](const auto& d) {
            using T = typename std::decay_t<decltype(d)>::value_type;
            Dense<T> out(d.cols(), d.rows());
            for (std::size_t i = 0; i < d.rows(); ++i)
                for (std::size_t j = 0; j < d.cols(); ++j) out(j, i) = d(i, j);
            return Matrix(std::move(out));
        },
        storage_);
}

Matrix Matrix::column(std::size_t j) const {
    const std::size_t idx[] = {j};
    return select_columns(idx);
}

Matrix Matrix::select_columns(std::span<const std::size_t> indices) const {
    return std::visit([&](const auto& d) { return Matrix(select(d, indices)); }, storage_);
}

bool Matrix::column_is_zero(std::size_t j) const {
    return std::visit(
        [&](const auto& d) {
            for (std::size_t i = 0; i < d.rows(); ++i)
                if (d(i, j) != 0) return false;
            return true;
        },
        storage_);
}

bool Matrix::operator==(const Matrix& other) const {
    return storage_ == other.storage_;
}

}  // namespace hadamard

#include "hadamard/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "hadamard/error.hpp"

namespace hadamard {

namespace {

std::size_t parse_size(const std::string& token, const char* what) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || value == 0) {
        throw Error(ErrorCode::ParseError, std::string("invalid ") + what + " '" + token + "'");
    }
    return value;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
    if (text == "inf") return INFINITY;
    if (text == "-inf") return -INFINITY;
    double value = 0.0;
    const char* first = text.data();
    if (!text.empty() && text.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
        throw Error(ErrorCode::ParseError, "invalid number '" + std::string(text) + "'");
    }
    return value;
}

Matrix read_matrix(std::istream& in) {
    std::string line;
    while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
    }
    std::istringstream header(line);
    std::string rows_tok, cols_tok, tag;
    if (!(header >> rows_tok >> cols_tok >> tag)) {
        throw Error(ErrorCode::ParseError, "matrix header must read 'rows cols tag'");
    }
    const std::size_t rows = parse_size(rows_tok, "row count");
    const std::size_t cols = parse_size(cols_tok, "column count");
    if (tag != "float" && tag != "rational") {
        throw Error(ErrorCode::ParseError, "unknown scalar tag '" + tag + "'");
    }
    std::vector<std::string> tokens;
    tokens.reserve(rows * cols);
    for (std::size_t i = 0; i < rows; ++i) {
        if (!std::getline(in, line)) {
            throw Error(ErrorCode::ParseError, "expected " + std::to_string(rows) + " rows, got " + std::to_string(i));
        }
        std::istringstream row(line);
        std::string tok;
        std::size_t count = 0;
        while (row >> tok) {
            tokens.push_back(tok);
            ++count;
        }
        if (count != cols) {
            throw Error(ErrorCode::ParseError, "row " + std::to_string(i + 1) + " has " + std::to_string(count) +
                                                   " entries, expected " + std::to_string(cols));
        }
    }
    if (tag == "float") {
        std::vector<double> entries;
        entries.reserve(tokens.size());
        for (const auto& t : tokens) entries.push_back(parse_double(t));
        return Matrix::from_floats(rows, cols, std::move(entries));
    }
    std::vector<Rational> entries;
    entries.reserve(tokens.size());
    for (const auto& t : tokens) entries.push_back(parse_rational(t));
    return Matrix::from_rationals(rows, cols, std::move(entries));
}

Matrix parse_matrix(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_matrix(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
    out << m.rows() << ' ' << m.cols() << ' ' << (m.is_float() ? "float" : "rational") << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ' ';
            out << (m.is_float() ? format_double(m.floats()(i, j)) : format_rational(m.rationals()(i, j)));
        }
        out << '\n';
    }
}

std::string format_matrix(const Matrix& m) {
    std::ostringstream out;
    write_matrix(out, m);
    return out.str();
}

void write_csv(std::ostream& out, const Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (j > 0) out << ',';
            out << (m.is_float() ? format_double(m.floats()(i, j)) : format_rational(m.rationals()(i, j)));
        }
        out << '\n';
    }
}

}  // namespace hadamard

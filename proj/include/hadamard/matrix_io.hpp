#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "hadamard/matrix.hpp"

namespace hadamard {

// Text format:
//   rows cols tag          (tag is "float" or "rational")
//   <rows lines of whitespace-separated entries>
// Rational entries are "p/q" or bare integers.

Matrix read_matrix(std::istream& in);
Matrix parse_matrix(std::string_view text);
void write_matrix(std::ostream& out, const Matrix& m);
std::string format_matrix(const Matrix& m);

/// Comma-separated entries, one row per line, no header.
void write_csv(std::ostream& out, const Matrix& m);

/// Shortest decimal string that round-trips to the same double; "inf",
/// "-inf" and "nan" for non-finite values.
std::string format_double(double value);

double parse_double(std::string_view text);

}  // namespace hadamard

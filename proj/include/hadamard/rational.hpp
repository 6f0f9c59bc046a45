#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace hadamard {

// Arbitrary precision rational; gmp keeps it canonical (den > 0, gcd 1)
// as long as every constructor path goes through canonicalize().
using Rational = mpq_class;
using BigInt = mpz_class;

Rational rational_pow(const Rational& base, unsigned long exponent);

// Exact binary value of a finite double.
Rational rational_from_double(double value);

// Accepts "p/q", "p", and decimal notation such as "-1.25" or "3e-2".
Rational parse_rational(std::string_view text);

std::string format_rational(const Rational& value);

BigInt binomial(unsigned long n, unsigned long k);

}  // namespace hadamard

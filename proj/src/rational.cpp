#include "hadamard/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "hadamard/error.hpp"

namespace hadamard {

Rational rational_pow(const Rational& base, unsigned long exponent) {
    Rational result;
    mpz_pow_ui(result.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
    mpz_pow_ui(result.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
    // num^e / den^e is already canonical when num/den is.
    return result;
}

Rational rational_from_double(double value) {
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::ParseError, "cannot convert non-finite value to a rational");
    }
    return Rational(value);  // mpq_set_d is exact
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

BigInt parse_integer(std::string_view text, std::string_view whole) {
    std::string_view digits = text;
    bool negative = false;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) {
        negative = digits.front() == '-';
        digits.remove_prefix(1);
    }
    if (!all_digits(digits)) {
        throw Error(ErrorCode::ParseError, "invalid rational '" + std::string(whole) + "'");
    }
    BigInt value(std::string(digits), 10);
    return negative ? BigInt(-value) : value;
}

Rational parse_decimal(std::string_view text) {
    std::string_view rest = text;
    bool negative = false;
    if (!rest.empty() && (rest.front() == '-' || rest.front() == '+')) {
        negative = rest.front() == '-';
        rest.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = rest.find_first_of("eE"); e != std::string_view::npos) {
        exponent = parse_integer(rest.substr(e + 1), text).get_si();
        rest = rest.substr(0, e);
    }
    std::string digits;
    if (auto dot = rest.find('.'); dot != std::string_view::npos) {
        std::string_view frac = rest.substr(dot + 1);
        digits = std::string(rest.substr(0, dot)) + std::string(frac);
        exponent -= static_cast<long>(frac.size());
    } else {
        digits = std::string(rest);
    }
    if (!all_digits(digits)) {
        throw Error(ErrorCode::ParseError, "invalid rational '" + std::string(text) + "'");
    }
    Rational value(BigInt(digits, 10));
    BigInt scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    if (exponent >= 0) {
        value *= scale;
    } else {
        value /= scale;
    }
    value.canonicalize();
    return negative ? Rational(-value) : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    if (text.empty()) throw Error(ErrorCode::ParseError, "empty rational entry");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        BigInt num = parse_integer(text.substr(0, slash), text);
        BigInt den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) throw Error(ErrorCode::ParseError, "zero denominator in '" + std::string(text) + "'");
        Rational value(num, den);
        value.canonicalize();
        return value;
    }
    if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text);
    return Rational(parse_integer(text, text));
}

std::string format_rational(const Rational& value) {
    return value.get_str(10);
}

BigInt binomial(unsigned long n, unsigned long k) {
    BigInt result;
    mpz_bin_uiui(result.get_mpz_t(), n, k);
    return result;
}

}  // namespace hadamard

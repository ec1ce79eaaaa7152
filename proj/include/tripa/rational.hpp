#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace tripa {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Parses "0.25", "-1.5e-2", "7" or "2/3" into an exact rational.
// Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

// "num/den" in lowest terms; plain "num" when the denominator is 1.
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) {
    return value.convert_to<double>();
}

// base^exp with the 0^0 == 1 convention (needed by polynomial coefficient sums)
Rational pow_nn(const Rational& base, unsigned exp);

BigInt binomial(std::uint64_t n, std::uint64_t k);

}  // namespace tripa

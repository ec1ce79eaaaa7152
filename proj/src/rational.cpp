#include "tripa/rational.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace tripa {

namespace {

BigInt pow10(long e) {
    BigInt result = 1;
    for (long i = 0; i < e; ++i) result *= 10;
    return result;
}

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// cpp_int's string constructor treats a leading 0 as an octal prefix
BigInt decimal_bigint(const std::string& digits) {
    const auto first = digits.find_first_not_of('0');
    return BigInt(first == std::string::npos ? "0" : digits.substr(first));
}

}  // namespace

Rational parse_rational(const std::string& text) {
    const auto fail = [&] {
        throw std::invalid_argument("not a decimal or rational literal: '" + text + "'");
    };

    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty()) fail();

    // fraction form a/b
    if (auto slash = s.find('/'); slash != std::string::npos) {
        const std::string num = s.substr(0, slash);
        const std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den)) fail();
        BigInt d = decimal_bigint(den);
        if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        Rational r{decimal_bigint(num), d};
        return negative ? -r : r;
    }

    // decimal form [digits][.digits][e[+-]digits]
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
        const std::string exp_part = s.substr(e + 1);
        if (exp_part.empty()) fail();
        std::size_t pos = 0;
        try {
            exponent = std::stol(exp_part, &pos);
        } catch (const std::exception&) {
            fail();
        }
        if (pos != exp_part.size()) fail();
        s.erase(e);
    }

    std::string digits = s;
    if (auto dot = s.find('.'); dot != std::string::npos) {
        digits = s.substr(0, dot) + s.substr(dot + 1);
        exponent -= static_cast<long>(s.size() - dot - 1);
    }
    if (!all_digits(digits)) fail();

    Rational r{decimal_bigint(digits)};
    if (exponent > 0)
        r *= pow10(exponent);
    else if (exponent < 0)
        r /= pow10(-exponent);
    return negative ? -r : r;
}

std::string format_rational(const Rational& value) {
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

Rational pow_nn(const Rational& base, unsigned exp) {
    Rational result = 1;
    Rational b = base;
    while (exp > 0) {
        if (exp & 1u) result *= b;
        exp >>= 1u;
        if (exp) b *= b;
    }
    return result;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        result *= n - k + i;
        result /= i;  // exact at each stage
    }
    return result;
}

}  // namespace tripa

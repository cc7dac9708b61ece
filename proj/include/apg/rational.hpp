#pragma once

#include <numeric>
#include <string>

#include "apg/common.hpp"

namespace apg {

/// Exact rational on int64 with overflow checks. Big enough for the
/// Green-Tao parameter formulas up to r = 30; anything larger throws.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n, i64 d) : num(n), den(d) { normalize(); }
    Rational(i64 n) : num(n), den(1) {}  // NOLINT(google-explicit-constructor)

    void normalize() {
        if (den == 0) throw domain_error("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i64 g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        if (num == 0) den = 1;
    }

    static i64 checked(i128 v) {
        if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
            throw resource_error("Rational: 64-bit overflow");
        return static_cast<i64>(v);
    }

    Rational operator*(const Rational& o) const {
        i64 g1 = std::gcd(num < 0 ? -num : num, o.den);
        i64 g2 = std::gcd(o.num < 0 ? -o.num : o.num, den);
        return {checked(i128(num / g1) * (o.num / g2)), checked(i128(den / g2) * (o.den / g1))};
    }
    Rational operator+(const Rational& o) const {
        i64 g = std::gcd(den, o.den);
        return {checked(i128(num) * (o.den / g) + i128(o.num) * (den / g)),
                checked(i128(den) * (o.den / g))};
    }
    Rational operator-(const Rational& o) const {
        i64 g = std::gcd(den, o.den);
        return {checked(i128(num) * (o.den / g) - i128(o.num) * (den / g)),
                checked(i128(den) * (o.den / g))};
    }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    /// "num/den", or just "num" when integral.
    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

}  // namespace apg

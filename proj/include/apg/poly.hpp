#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <initializer_list>
#include <vector>

#include "apg/common.hpp"

namespace apg {

using BigInt = boost::multiprecision::cpp_int;

/// Dense univariate polynomial over Z with arbitrary-precision coefficients,
/// stored low-degree first with no high-order zero padding.
class IntPolynomial {
  public:
    IntPolynomial() = default;
    explicit IntPolynomial(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { normalize(); }
    IntPolynomial(std::initializer_list<long long> coeffs) {
        for (long long v : coeffs) c_.emplace_back(v);
        normalize();
    }
    static IntPolynomial constant(BigInt v) {
        IntPolynomial p;
        if (v != 0) p.c_.push_back(std::move(v));
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // zero poly: -1
    const std::vector<BigInt>& coeffs() const { return c_; }
    const BigInt& coeff(size_t i) const {
        static const BigInt zero = 0;
        return i < c_.size() ? c_[i] : zero;
    }
    const BigInt& leading() const {
        if (is_zero()) throw domain_error("IntPolynomial: zero polynomial has no leading coefficient");
        return c_.back();
    }

    /// Max |coefficient|; 0 for the zero polynomial.
    BigInt height() const;

    /// gcd of coefficients, nonnegative.
    BigInt content() const;

    /// Content-stripped copy (signs preserved); zero stays zero.
    IntPolynomial primitive_part() const;

    int trailing_zeros() const;
    IntPolynomial shift_down(int k) const;  // divide by x^k; requires x^k | this

    BigInt eval(const BigInt& v) const;
    u64 eval_mod(u64 x, u64 p) const;

    IntPolynomial operator+(const IntPolynomial& o) const;
    IntPolynomial operator-(const IntPolynomial& o) const;
    IntPolynomial operator*(const IntPolynomial& o) const;
    IntPolynomial operator-() const;
    IntPolynomial scaled(const BigInt& s) const;

    bool operator==(const IntPolynomial& o) const { return c_ == o.c_; }

  private:
    std::vector<BigInt> c_;
    void normalize() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

IntPolynomial pow(const IntPolynomial& base, int e);

/// Primitive gcd over Z[x] (primitive PRS), sign-normalized to a positive
/// leading coefficient; gcd with the zero polynomial is the other argument's
/// primitive part. Constants count as coprime (gcd 1).
IntPolynomial poly_gcd(IntPolynomial a, IntPolynomial b);

/// Exact quotient num/den in Z[x]; throws verification_error when den does
/// not divide num exactly.
IntPolynomial div_exact_poly(const IntPolynomial& num, const IntPolynomial& den);

/// Resultant over Z via the subresultant polynomial-remainder sequence;
/// exact, with content pulled out up front. Zero inputs are a domain error.
BigInt resultant(const IntPolynomial& f, const IntPolynomial& g);

/// Resultant of the mod-q reductions, computed by the Euclidean recurrence
/// over F_q. Independent of the integer PRS route; q must be prime.
u64 resultant_mod(const IntPolynomial& f, const IntPolynomial& g, u64 q);

}  // namespace apg

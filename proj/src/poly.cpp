#include "apg/poly.hpp"

#include <algorithm>

namespace apg {

namespace {

BigInt big_gcd(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

BigInt big_pow(BigInt base, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

// Exact scalar division; the subresultant recurrences guarantee it.
IntPolynomial div_exact(const IntPolynomial& p, const BigInt& s) {
    if (s == 0) throw domain_error("div_exact: division by zero");
    std::vector<BigInt> out;
    out.reserve(p.coeffs().size());
    for (const BigInt& c : p.coeffs()) {
        if (c % s != 0) throw verification_error("div_exact: inexact division in PRS");
        out.push_back(c / s);
    }
    return IntPolynomial(std::move(out));
}

// Pseudo-remainder: lc(B)^(deg A - deg B + 1) * A mod B, exact over Z.
IntPolynomial prem(const IntPolynomial& A, const IntPolynomial& B) {
    const BigInt& lb = B.leading();
    const int dB = B.degree();
    IntPolynomial R = A;
    int e = A.degree() - dB + 1;
    while (!R.is_zero() && R.degree() >= dB) {
        // R <- lb*R - lc(R)*x^(dR-dB)*B
        std::vector<BigInt> next(R.coeffs().size());
        const int shift = R.degree() - dB;
        const BigInt lr = R.leading();
        for (size_t i = 0; i < R.coeffs().size(); ++i) next[i] = R.coeffs()[i] * lb;
        for (int i = 0; i <= dB; ++i) next[static_cast<size_t>(i + shift)] -= lr * B.coeffs()[static_cast<size_t>(i)];
        R = IntPolynomial(std::move(next));
        --e;
    }
    if (e > 0) {
        BigInt mult = big_pow(lb, e);
        R = R.scaled(mult);
    }
    return R;
}

}  // namespace

BigInt IntPolynomial::height() const {
    BigInt h = 0;
    for (const BigInt& c : c_) {
        BigInt a = c < 0 ? BigInt(-c) : c;
        if (a > h) h = a;
    }
    return h;
}

BigInt IntPolynomial::content() const {
    BigInt g = 0;
    for (const BigInt& c : c_) {
        g = big_gcd(g, c);
        if (g == 1) break;
    }
    return g;
}

IntPolynomial IntPolynomial::primitive_part() const {
    if (is_zero()) return {};
    return div_exact(*this, content());
}

int IntPolynomial::trailing_zeros() const {
    int n = 0;
    while (n < static_cast<int>(c_.size()) && c_[static_cast<size_t>(n)] == 0) ++n;
    return n;
}

IntPolynomial IntPolynomial::shift_down(int k) const {
    if (k == 0) return *this;
    if (trailing_zeros() < k) throw domain_error("shift_down: x^k does not divide the polynomial");
    return IntPolynomial(std::vector<BigInt>(c_.begin() + k, c_.end()));
}

BigInt IntPolynomial::eval(const BigInt& v) const {
    BigInt acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * v + *it;
    return acc;
}

u64 IntPolynomial::eval_mod(u64 x, u64 p) const {
    u64 acc = 0;
    x %= p;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        BigInt c = *it % p;
        if (c < 0) c += p;
        acc = (mulmod(acc, x, p) + static_cast<u64>(c)) % p;
    }
    return acc;
}

IntPolynomial IntPolynomial::operator+(const IntPolynomial& o) const {
    std::vector<BigInt> out(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) out[i] += o.c_[i];
    return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator-(const IntPolynomial& o) const {
    std::vector<BigInt> out(std::max(c_.size(), o.c_.size()), 0);
    for (size_t i = 0; i < c_.size(); ++i) out[i] += c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) out[i] -= o.c_[i];
    return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator*(const IntPolynomial& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<BigInt> out(c_.size() + o.c_.size() - 1, 0);
    for (size_t i = 0; i < c_.size(); ++i)
        for (size_t j = 0; j < o.c_.size(); ++j) out[i + j] += c_[i] * o.c_[j];
    return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::operator-() const {
    std::vector<BigInt> out(c_);
    for (BigInt& c : out) c = -c;
    return IntPolynomial(std::move(out));
}

IntPolynomial IntPolynomial::scaled(const BigInt& s) const {
    std::vector<BigInt> out(c_);
    for (BigInt& c : out) c *= s;
    return IntPolynomial(std::move(out));
}

IntPolynomial pow(const IntPolynomial& base, int e) {
    IntPolynomial r = IntPolynomial::constant(1);
    for (int i = 0; i < e; ++i) r = r * base;
    return r;
}

IntPolynomial poly_gcd(IntPolynomial a, IntPolynomial b) {
    auto normalize = [](IntPolynomial p) {
        if (p.is_zero()) return p;
        p = p.primitive_part();
        if (p.leading() < 0) p = -p;
        return p;
    };
    if (a.is_zero()) return normalize(std::move(b));
    if (b.is_zero()) return normalize(std::move(a));
    a = a.primitive_part();
    b = b.primitive_part();
    if (a.degree() < b.degree()) std::swap(a, b);
    while (!b.is_zero()) {
        IntPolynomial r = prem(a, b);
        a = std::move(b);
        b = r.is_zero() ? IntPolynomial{} : r.primitive_part();
    }
    return normalize(std::move(a));
}

IntPolynomial div_exact_poly(const IntPolynomial& num, const IntPolynomial& den) {
    if (den.is_zero()) throw domain_error("div_exact_poly: division by zero polynomial");
    if (num.is_zero()) return {};
    const int dq = num.degree() - den.degree();
    if (dq < 0) throw verification_error("div_exact_poly: quotient degree negative");
    std::vector<BigInt> rem = num.coeffs();
    std::vector<BigInt> q(static_cast<size_t>(dq) + 1);
    const int dd = den.degree();
    for (int i = dq; i >= 0; --i) {
        BigInt top = rem[static_cast<size_t>(i + dd)];
        if (top % den.leading() != 0)
            throw verification_error("div_exact_poly: inexact division");
        BigInt c = top / den.leading();
        q[static_cast<size_t>(i)] = c;
        for (int j = 0; j <= dd; ++j)
            rem[static_cast<size_t>(i + j)] -= c * den.coeffs()[static_cast<size_t>(j)];
    }
    for (const BigInt& v : rem)
        if (v != 0) throw verification_error("div_exact_poly: nonzero remainder");
    return IntPolynomial(std::move(q));
}

BigInt resultant(const IntPolynomial& f, const IntPolynomial& g) {
    if (f.is_zero() || g.is_zero()) throw domain_error("resultant: zero polynomial");

    IntPolynomial A = f, B = g;
    int sign = 1;
    if (A.degree() < B.degree()) {
        std::swap(A, B);
        if ((A.degree() & 1) && (B.degree() & 1)) sign = -sign;
    }
    if (B.degree() == 0) return sign * big_pow(B.leading(), A.degree());

    // Pull contents out; track their contribution separately.
    BigInt ca = A.content(), cb = B.content();
    A = div_exact(A, ca);
    B = div_exact(B, cb);
    BigInt t = big_pow(ca, B.degree()) * big_pow(cb, A.degree());

    BigInt gpart = 1, hpart = 1;
    for (;;) {
        const int dA = A.degree(), dB = B.degree();
        const int delta = dA - dB;
        if ((dA & 1) && (dB & 1)) sign = -sign;
        IntPolynomial R = prem(A, B);
        A = B;
        B = div_exact(R, gpart * big_pow(hpart, delta));
        gpart = A.leading();
        if (delta > 0) {
            // h <- g^delta / h^(delta-1), exact
            BigInt num = big_pow(gpart, delta);
            BigInt den = big_pow(hpart, delta - 1);
            if (num % den != 0) throw verification_error("resultant: inexact h update");
            hpart = num / den;
        }
        if (B.is_zero()) return 0;  // common factor of positive degree
        if (B.degree() == 0) break;
    }

    BigInt num = big_pow(B.leading(), A.degree());
    BigInt den = big_pow(hpart, A.degree() - 1);
    if (num % den != 0) throw verification_error("resultant: inexact final division");
    return sign * t * (num / den);
}

u64 resultant_mod(const IntPolynomial& f, const IntPolynomial& g, u64 q) {
    if (q < 2) throw domain_error("resultant_mod: q must be prime");
    auto reduce = [&](const IntPolynomial& p) {
        std::vector<u64> out;
        out.reserve(p.coeffs().size());
        for (const BigInt& c : p.coeffs()) {
            BigInt r = c % q;
            if (r < 0) r += q;
            out.push_back(static_cast<u64>(r));
        }
        while (!out.empty() && out.back() == 0) out.pop_back();
        return out;
    };
    std::vector<u64> A = reduce(f), B = reduce(g);
    if (A.empty() || B.empty()) return 0;

    u64 res = 1;
    int sign = 1;
    if (A.size() < B.size()) {
        std::swap(A, B);
        if (((A.size() - 1) & 1) && ((B.size() - 1) & 1)) sign = -sign;
    }
    for (;;) {
        const int dA = static_cast<int>(A.size()) - 1;
        const int dB = static_cast<int>(B.size()) - 1;
        if (dB == 0) {
            res = mulmod(res, powmod(B[0], dA, q), q);
            break;
        }
        // R = A mod B over F_q
        std::vector<u64> R = A;
        u64 inv_lb = powmod(B.back(), q - 2, q);
        for (int i = dA; i >= dB; --i) {
            u64 top = R[static_cast<size_t>(i)];
            if (top == 0) continue;
            u64 c = mulmod(top, inv_lb, q);
            for (int j = 0; j <= dB; ++j) {
                u64& slot = R[static_cast<size_t>(i - dB + j)];
                slot = (slot + q - mulmod(c, B[static_cast<size_t>(j)], q)) % q;
            }
        }
        while (!R.empty() && R.back() == 0) R.pop_back();
        if (R.empty()) return 0;
        const int dR = static_cast<int>(R.size()) - 1;
        if ((dA & 1) && (dB & 1)) sign = -sign;
        res = mulmod(res, powmod(B.back(), dA - dR, q), q);
        A = std::move(B);
        B = std::move(R);
    }
    if (sign < 0 && res != 0) res = q - res;
    return res;
}

}  // namespace apg

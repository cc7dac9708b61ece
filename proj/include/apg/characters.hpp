#pragma once

#include <complex>
#include <vector>

#include "apg/field.hpp"
#include "apg/json.hpp"

namespace apg {

/// Multiplicative character of F_p^*, identified by its exponent e on the
/// primitive root: chi(g^t) = e^(2*pi*i*e*t/(p-1)). chi(0) = 0 for every
/// character, the trivial one included.
struct Character {
    const FieldContext* ctx = nullptr;
    u64 e = 0;

    bool trivial() const { return e == 0; }

    /// chi = 1 on the order-d subgroup iff d | e.
    bool trivial_on(const Subgroup& G) const { return e % G.order() == 0; }

    std::complex<double> eval(u64 x) const {
        if (x == 0) return {0.0, 0.0};
        u64 m = ctx->p() - 1;
        return ctx->unit_roots()[(e * ctx->dlog(x)) % m];
    }

    Character times(const Character& o) const {
        return {ctx, (e + o.e) % (ctx->p() - 1)};
    }
};

/// The (p-1)/|G| characters that are identically 1 on G: exponents
/// 0, d, 2d, ... The trivial character comes first.
std::vector<Character> characters_trivial_on(const Subgroup& G);

/// | (|G|/(p-1)) * sum of chi(x) over chi trivial on G  -  1_G(x) |.
/// Zero (to float tolerance) for every x, including x = 0.
double indicator_expansion_residual(const Subgroup& G, u64 x);

/// Tuple (chi_1, ..., chi_r) over one context; I = positions of the
/// nontrivial entries.
struct CharTuple {
    std::vector<Character> chars;

    std::vector<int> nontrivial_indices() const {
        std::vector<int> I;
        for (size_t s = 0; s < chars.size(); ++s)
            if (!chars[s].trivial()) I.push_back(static_cast<int>(s) + 1);
        return I;
    }
};

/// sum over x in F_p of chi_1(1+x) * chi_2(1+2x) * ... * chi_r(1+rx).
/// Any factor hitting 0 kills the term (chi(0) = 0).
std::complex<double> progression_char_sum(const CharTuple& tuple);

struct WeilReport {
    u64 p = 0;
    u64 d = 0;
    int r = 0;
    u64 tuples_checked = 0;
    double max_abs_sum = 0.0;
    double worst_ratio = 0.0;
    bool pass = true;

    ojson to_json() const;
};

/// Checks |progression_char_sum| <= |I| * sqrt(p) over character tuples
/// trivial on G with at least one nontrivial entry.
///
/// cap = 0 forces full enumeration; otherwise tuple spaces larger than cap
/// are sampled (seeded). Exhaustive enumeration for r <= 3 shares phase
/// tables across tuples, so the full grid stays tractable; runs estimated
/// beyond ops_budget refuse with a resource error instead of hanging.
/// Violations are flagged in the report, never thrown.
WeilReport verify_weil(const Subgroup& G, int r, u64 cap = 0, u64 seed = 1,
                       unsigned threads = 1, u64 ops_budget = u64(20000000000));

}  // namespace apg

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "apg/field.hpp"
#include "apg/json.hpp"
#include "apg/poly.hpp"
#include "apg/rational.hpp"

namespace apg {

/// Parameters for the product-difference polynomial family: block size r0
/// (default floor(ln r), at least 1), exponent cap u, delta = 100/r0.
struct ConstructionConfig {
    int r = 2;
    int r0 = 1;
    int u = 2;
    double delta = 100.0;

    static ConstructionConfig make(int r, int r0 = 0, int u = 2);
};

/// Order of the subgroup generated by {1+t, ..., 1+rt} (lcm of element
/// orders), or nullopt when some 1+st vanishes mod p. t = 0 is a domain error.
std::optional<u64> ord_tuple(const FieldContext& ctx, u64 t, int r);

struct OrdScanResult {
    u64 t_min = 0;
    u64 ord_min = 0;
    u64 invalid_count = 0;

    ojson to_json(u64 p, int r) const;
};

/// Minimum of ord_tuple over all valid t in [1, p-1]; ties resolve to the
/// smallest witness t.
OrdScanResult min_ord_scan(const FieldContext& ctx, int r, unsigned threads = 1);

/// Integer endpoints of [T^(1/2-eta), T^(1/2-eta/2)]; shared by the counting
/// routine and any oracle so boundary rounding can never disagree.
std::pair<u64, u64> density_interval(u64 T, double eta);

struct PrimeDensityResult {
    u64 count = 0;
    double interval_lo = 0.0;
    double interval_hi = 0.0;
    u64 qlo = 0;
    u64 qhi = 0;
    u64 interval_prime_count = 0;
    double ratio_to_T_over_logT = 0.0;
    double ratio_to_eta_T_over_logT = 0.0;

    ojson to_json(u64 T, double eta) const;
};

/// Number of primes p <= T such that p-1 has a prime divisor q in
/// [T^(1/2-eta), T^(1/2-eta/2)], computed as |union of A_q| by
/// inclusion-exclusion over the interval primes (A_q = {p <= T : q | p-1}),
/// never by factoring each p-1.
PrimeDensityResult prime_density(u64 T, double eta);

/// One product-difference polynomial: (s, exponent) pairs for each side.
struct ProductDifferenceSpec {
    std::vector<std::pair<int, int>> e1;
    std::vector<std::pair<int, int>> e2;

    std::string label() const;
};

/// prod_{s in E1} (1+sx)^{u_s} - prod_{s in E2} (1+sx)^{u_s}. E1, E2 must be
/// disjoint nonempty-union subsets of [1, r] with |E1|+|E2| <= r0 and
/// exponents in [1, u]. The result is always divisible by x, of degree
/// <= r0*u and height <= r^(2*r0*u); those bounds are re-checked on every call.
IntPolynomial build_product_difference(const ProductDifferenceSpec& spec,
                                       const ConstructionConfig& cfg);

struct FamilyPolynomial {
    IntPolynomial poly;
    std::string label;  // provenance of the first spec that produced it
};

/// Visits every (E1, E2, exponents) spec for cfg, in a fixed deterministic
/// order, with the built polynomial.
void for_each_product_difference(
    const ConstructionConfig& cfg,
    const std::function<void(const ProductDifferenceSpec&, const IntPolynomial&)>& fn);

/// The product-difference polynomials for cfg with powers of x and integer
/// content stripped and signs normalized, then refined by gcd splitting into
/// a pairwise-coprime basis (distinct raw members can share an irreducible
/// factor, which would zero a pairwise resultant). Sorted by degree then
/// coefficient vector; every root of every raw polynomial other than 0 is a
/// root of some basis member.
std::vector<FamilyPolynomial> difference_family(const ConstructionConfig& cfg,
                                                u64 family_budget = 100000);

struct CertificateResult {
    ConstructionConfig cfg;
    u64 raw_poly_count = 0;
    u64 poly_count = 0;  // after normalization + dedup
    BigInt max_height;   // over raw product-difference polynomials
    BigInt height_bound; // r^(2*r0*u)
    u64 resultant_count = 0;
    BigInt max_abs_resultant;
    std::vector<u64> delta_primes;
    bool all_nonzero = true;

    ojson to_json() const;
};

/// Enumerates the family, takes all pairwise resultants, and reports the
/// "bad prime" set: primes <= prime_budget dividing some resultant. A zero
/// resultant between distinct family members breaks the certificate and
/// throws verification_error naming the pair.
CertificateResult bad_prime_certificate(const ConstructionConfig& cfg,
                                        u64 prime_budget = 10000,
                                        u64 family_budget = 100000);

struct IndependenceResult {
    Rational z;
    int r = 0;
    u64 rank = 0;
    std::vector<int> chosen_s;
    std::vector<std::string> values;  // the chosen 1+sz, reduced, as "num/den"
    std::vector<int> excluded_s;      // s with 1+sz = 0

    ojson to_json() const;
};

/// Maximal multiplicatively independent subset of {1+sz : 1 <= s <= r} for
/// rational z != 0, greedy smallest-s-first by exponent-vector rank over Q.
/// Signs are dropped (torsion does not affect rank); values equal to +-1
/// carry the zero vector and are never independent.
IndependenceResult mult_independent_subset(const Rational& z, int r);

struct ApFreeRow {
    u64 p = 0;
    int r = 0;
    u64 best_d = 0;  // largest AP-free divisor in the window, 0 if none
    double best_exponent = 0.0;
    double threshold_exponent = 0.0;  // log_p of the positivity-threshold order
    u64 divisors_tested = 0;

    static std::string csv_header();
    std::string csv_row() const;
    ojson to_json() const;
};

/// For each prime in [pmin, pmax]: walk divisors of p-1 inside the exponent
/// window from the top down and record the largest AP-free subgroup order.
std::vector<ApFreeRow> apfree_search(u64 pmin, u64 pmax, int r,
                                     double window_lo = 0.0, double window_hi = 1.0,
                                     unsigned threads = 1,
                                     u64 table_budget = FieldContext::kDefaultTableBudget);

}  // namespace apg

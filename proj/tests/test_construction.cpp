#include <doctest.h>

#include <cmath>
#include <set>

#include "apg/census.hpp"
#include "apg/construction.hpp"
#include "apg/factor.hpp"
#include "support/oracles.hpp"

using namespace apg;

TEST_CASE("construction config defaults") {
    ConstructionConfig c4 = ConstructionConfig::make(4);
    CHECK(c4.r0 == 1);  // floor(ln 4)
    CHECK(c4.delta == doctest::Approx(100.0));

    ConstructionConfig c10 = ConstructionConfig::make(10);
    CHECK(c10.r0 == 2);

    ConstructionConfig c1 = ConstructionConfig::make(1);
    CHECK(c1.r0 == 1);

    ConstructionConfig custom = ConstructionConfig::make(4, 2, 2);
    CHECK(custom.r0 == 2);
    CHECK(custom.delta == doctest::Approx(50.0));

    CHECK_THROWS_AS(ConstructionConfig::make(2, 5, 2), domain_error);
    CHECK_THROWS_AS(ConstructionConfig::make(2, 1, 0), domain_error);
}

TEST_CASE("ord_tuple examples") {
    FieldContext f7(7);
    CHECK(ord_tuple(f7, 1, 2) == 6);
    CHECK_FALSE(ord_tuple(f7, 3, 2).has_value());  // 1 + 2*3 = 7
    CHECK(ord_tuple(f7, 5, 1) == 2);               // ord(6) = 2
    CHECK_THROWS_AS(ord_tuple(f7, 0, 2), domain_error);
    CHECK_THROWS_AS(ord_tuple(f7, 7, 2), domain_error);
}

TEST_CASE("ord_tuple equals multiplicative closure size") {
    for (u64 p : primes_upto(100)) {
        if (p < 7) continue;
        FieldContext ctx(p);
        for (int r = 1; r <= 4; ++r) {
            for (u64 t = 1; t < p; ++t) {
                std::vector<u64> gens;
                bool valid = true;
                for (int s = 1; s <= r; ++s) {
                    u64 y = (1 + static_cast<u64>(s) * t) % p;
                    if (y == 0) {
                        valid = false;
                        break;
                    }
                    gens.push_back(y);
                }
                auto o = ord_tuple(ctx, t, r);
                CHECK(o.has_value() == valid);
                if (valid) CHECK(*o == oracle::multiplicative_closure(p, gens).size());
            }
        }
    }
}

TEST_CASE("min_ord_scan examples") {
    FieldContext f7(7);
    OrdScanResult s7 = min_ord_scan(f7, 2);
    CHECK(s7.ord_min == 6);  // every valid t generates the full group
    CHECK(s7.t_min == 1);
    CHECK(s7.invalid_count == 2);  // t = 3 and t = 6

    FieldContext f3(3);
    OrdScanResult s3 = min_ord_scan(f3, 1);
    CHECK(s3.ord_min == 2);
    CHECK(s3.t_min == 1);
    CHECK(s3.invalid_count == 1);

    // r = p - 1: some shift always hits zero
    FieldContext f11(11);
    OrdScanResult s11 = min_ord_scan(f11, 10);
    CHECK(s11.invalid_count > 0);

    // thread-count independence
    OrdScanResult threaded = min_ord_scan(f11, 3, 4);
    OrdScanResult serial = min_ord_scan(f11, 3, 1);
    CHECK(threaded.ord_min == serial.ord_min);
    CHECK(threaded.t_min == serial.t_min);
    CHECK(threaded.invalid_count == serial.invalid_count);
}

TEST_CASE("prime density examples") {
    PrimeDensityResult r = prime_density(100, 0.2);
    CHECK(r.qlo == 4);
    CHECK(r.qhi == 6);
    CHECK(r.interval_prime_count == 1);  // just q = 5
    CHECK(r.count == 5);                 // p in {11, 31, 41, 61, 71}

    PrimeDensityResult empty = prime_density(100, 0.001);
    CHECK(empty.interval_prime_count == 0);
    CHECK(empty.count == 0);

    CHECK_THROWS_AS(prime_density(5, 0.2), domain_error);
    CHECK_THROWS_AS(prime_density(100, 0.6), domain_error);
    CHECK_THROWS_AS(prime_density(100, 0.0), domain_error);
}

TEST_CASE("prime density equals the factor-everything oracle") {
    for (u64 T : {1000ULL, 2000ULL}) {
        auto primes = primes_upto(T);
        for (double eta : {0.15, 0.2, 0.25, 0.35}) {
            auto [qlo, qhi] = density_interval(T, eta);
            CHECK(prime_density(T, eta).count == oracle::prime_density_brute(primes, qlo, qhi));
        }
    }
}

TEST_CASE("build_product_difference examples") {
    ConstructionConfig cfg = ConstructionConfig::make(2, 1, 1);
    CHECK(build_product_difference({{{1, 1}}, {{2, 1}}}, ConstructionConfig::make(2, 2, 1)) ==
          IntPolynomial{0, -1});
    CHECK(build_product_difference({{{1, 1}, {2, 1}}, {}}, ConstructionConfig::make(2, 2, 1)) ==
          IntPolynomial{0, 3, 2});
    CHECK(build_product_difference({{{2, 2}}, {}}, ConstructionConfig::make(2, 1, 2)) ==
          IntPolynomial{0, 4, 4});

    // precondition violations
    CHECK_THROWS_AS(build_product_difference({{}, {}}, cfg), domain_error);
    CHECK_THROWS_AS(build_product_difference({{{1, 1}}, {{1, 1}}}, ConstructionConfig::make(2, 2, 1)),
                    domain_error);
    CHECK_THROWS_AS(build_product_difference({{{1, 2}}, {}}, cfg), domain_error);  // u_s > u
    CHECK_THROWS_AS(build_product_difference({{{3, 1}}, {}}, cfg), domain_error);  // s > r
    CHECK_THROWS_AS(build_product_difference({{{1, 1}, {2, 1}}, {}}, cfg), domain_error);  // > r0
}

TEST_CASE("family bounds hold on every enumerated instance") {
    ConstructionConfig cfg = ConstructionConfig::make(4, 2, 2);
    BigInt bound = 1;
    for (int i = 0; i < 2 * cfg.r0 * cfg.u; ++i) bound *= cfg.r;
    u64 count = 0;
    for_each_product_difference(cfg, [&](const ProductDifferenceSpec&, const IntPolynomial& F) {
        ++count;
        CHECK(F.coeff(0) == 0);
        CHECK(F.degree() <= cfg.r0 * cfg.u);
        CHECK(F.height() <= bound);
    });
    CHECK(count == 112);  // sum_j C(4,j) * (2u)^j for j = 1, 2
}

TEST_CASE("tiny certificate: family collapses to the empty product") {
    CertificateResult res = bad_prime_certificate(ConstructionConfig::make(2, 1, 1));
    CHECK(res.poly_count == 0);
    CHECK(res.resultant_count == 0);
    CHECK(res.delta_primes.empty());
    CHECK(res.all_nonzero);
    CHECK(res.raw_poly_count == 4);  // +-x, +-2x before stripping
}

TEST_CASE("certificate at r=4, r0=2, u=2") {
    CertificateResult res = bad_prime_certificate(ConstructionConfig::make(4, 2, 2), 10000);
    CHECK(res.all_nonzero);
    CHECK(res.poly_count > 0);
    CHECK(res.resultant_count == res.poly_count * (res.poly_count - 1) / 2);
    CHECK(res.max_height <= res.height_bound);
    CHECK(res.height_bound == 65536);
    for (u64 q : res.delta_primes) CHECK(q <= 10000);
    // deterministic
    CertificateResult again = bad_prime_certificate(ConstructionConfig::make(4, 2, 2), 10000);
    CHECK(again.delta_primes == res.delta_primes);
    CHECK(again.poly_count == res.poly_count);
}

TEST_CASE("small-order witnesses are roots of some product-difference polynomial") {
    // Pigeonhole: if <1+t, ..., 1+rt> has order below u^r0, two exponent
    // assignments collide, so some family polynomial vanishes at t mod p.
    ConstructionConfig cfg = ConstructionConfig::make(4, 2, 3);
    std::vector<IntPolynomial> raw;
    for_each_product_difference(cfg, [&](const ProductDifferenceSpec&, const IntPolynomial& F) {
        raw.push_back(F);
    });
    const u64 threshold = 9;  // u^r0
    u64 firings = 0;
    for (u64 p : primes_upto(200)) {
        if (p < 7) continue;
        FieldContext ctx(p);
        for (u64 t = 1; t < p; ++t) {
            auto o = ord_tuple(ctx, t, cfg.r);
            if (!o || *o >= threshold) continue;
            ++firings;
            bool vanishes = false;
            for (const IntPolynomial& F : raw)
                if (F.eval_mod(t, p) == 0) {
                    vanishes = true;
                    break;
                }
            CHECK(vanishes);
        }
    }
    CHECK(firings > 0);  // the premise actually fires on this grid
}

TEST_CASE("mult_independent_subset examples") {
    IndependenceResult a = mult_independent_subset(Rational(1, 1), 5);
    CHECK(a.rank == 3);
    CHECK(a.chosen_s == std::vector<int>{1, 2, 4});
    CHECK(a.values == std::vector<std::string>{"2", "3", "5"});

    IndependenceResult b = mult_independent_subset(Rational(1, 2), 2);
    CHECK(b.rank == 2);
    CHECK(b.values == std::vector<std::string>{"3/2", "2"});

    CHECK_THROWS_AS(mult_independent_subset(Rational(0, 1), 5), domain_error);

    IndependenceResult c = mult_independent_subset(Rational(-1, 3), 5);  // 1 - s/3 hits 0 at s = 3
    CHECK(c.excluded_s == std::vector<int>{3});
    CHECK(c.rank == 2);
}

TEST_CASE("rank for z=1 counts primes up to r+1") {
    for (int r = 1; r <= 12; ++r) {
        IndependenceResult res = mult_independent_subset(Rational(1, 1), r);
        u64 pi = 0;
        for (u64 q : primes_upto(static_cast<u64>(r) + 1)) {
            (void)q;
            ++pi;
        }
        CHECK(res.rank == pi);
        CHECK(static_cast<double>(res.rank) > std::log(static_cast<double>(r)));
    }
}

TEST_CASE("values of +-1 are never independent") {
    // z = -1: values 1+s*(-1) = 0, -1, -2, ... ; s=1 gives 0 (excluded),
    // s=2 gives -1 (torsion, zero exponent vector).
    IndependenceResult res = mult_independent_subset(Rational(-1, 1), 4);
    CHECK(res.excluded_s == std::vector<int>{1});
    CHECK(res.rank == 2);  // from |-2| = 2 and |-3| = 3
    CHECK(res.chosen_s == std::vector<int>{3, 4});
}

TEST_CASE("apfree search") {
    auto rows = apfree_search(13, 13, 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].p == 13);
    CHECK(rows[0].best_d == 4);  // {1, 5, 8, 12} has no 3-term progression
    CHECK(rows[0].best_exponent == doctest::Approx(std::log(4.0) / std::log(13.0)));

    // AP-free orders never satisfy the positivity threshold
    for (const auto& row : apfree_search(5, 200, 2)) {
        if (row.best_d == 0) continue;
        double main = std::pow(static_cast<double>(row.best_d) / (row.p - 1.0), 2) * (row.p - 2.0);
        CHECK(main <= 2.0 * std::sqrt(static_cast<double>(row.p)) + 1e-9);
    }

    // window narrowing drops small divisors
    auto windowed = apfree_search(13, 13, 2, 0.5, 1.0);
    REQUIRE(windowed.size() == 1);
    CHECK(windowed[0].best_d == 4);  // 4 > 13^0.5; d in {4, 6, 12} tested
    CHECK(windowed[0].divisors_tested == 3);
}

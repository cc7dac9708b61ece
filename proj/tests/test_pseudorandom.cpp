#include <doctest.h>

#include <cmath>

#include "apg/census.hpp"
#include "apg/factor.hpp"
#include "apg/pseudorandom.hpp"

using namespace apg;

TEST_CASE("gt parameters") {
    GtParameters g2 = gt_parameters(2);
    CHECK(g2.kappa == Rational(1, 16));
    CHECK(g2.m0 == 4);
    CHECK(g2.subgroup_exponent == Rational(15, 16));

    GtParameters g3 = gt_parameters(3);
    CHECK(g3.kappa == Rational(1, 48));
    CHECK(g3.m0 == 12);

    for (int r = 1; r <= 30; ++r) {
        GtParameters g = gt_parameters(r);
        CHECK(g.kappa * Rational(4 * g.m0) == Rational(1));
        CHECK(g.subgroup_exponent + g.kappa == Rational(1));
    }
    CHECK_THROWS_AS(gt_parameters(0), domain_error);
    CHECK_THROWS_AS(gt_parameters(31), domain_error);

    CHECK(g2.to_json().dump() == R"({"kappa":"1/16","m0":4,"exponent":"15/16"})");
}

TEST_CASE("linear form system validation") {
    LinearFormSystem ok;
    ok.t = 2;
    ok.m = 3;
    ok.constants = {0, 0, 0};
    ok.coeffs = {{1, 0}, {0, 1}, {1, 1}};
    CHECK_NOTHROW(ok.validate());

    LinearFormSystem collinear = ok;
    collinear.coeffs = {{1, 0}, {2, 0}, {1, 1}};
    CHECK_THROWS_AS(collinear.validate(), domain_error);

    LinearFormSystem zero_row = ok;
    zero_row.coeffs = {{1, 0}, {0, 0}, {1, 1}};
    CHECK_THROWS_AS(zero_row.validate(), domain_error);

    LinearFormSystem scalar;  // t = 1 cannot host two non-collinear rows
    scalar.t = 1;
    scalar.m = 2;
    scalar.constants = {0, 1};
    scalar.coeffs = {{1}, {2}};
    CHECK_THROWS_AS(scalar.validate(), domain_error);

    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        LinearFormSystem sys = LinearFormSystem::random_valid(rng, 2, 4, 3);
        CHECK_NOTHROW(sys.validate());
    }
}

TEST_CASE("nu weight sums to p-1") {
    FieldContext ctx(101);
    for (u64 d : {1ULL, 4ULL, 25ULL, 100ULL}) {
        Subgroup G = ctx.subgroup(d);
        NuWeight nu(G);
        double sum = 0;
        for (u64 x = 0; x < 101; ++x) sum += nu(x);
        CHECK(sum == doctest::Approx(100.0).epsilon(1e-12));
    }
}

TEST_CASE("independent coordinates give the exact closed form") {
    for (auto [p, d] : {std::pair<u64, u64>{101, 100}, {101, 20}, {1009, 504}}) {
        FieldContext ctx(p);
        Subgroup G = ctx.subgroup(d);
        for (int m = 1; m <= 2; ++m) {
            LinearFormSystem sys;
            sys.t = 2;
            sys.m = m;
            sys.constants.assign(m, 0);
            sys.coeffs.assign(m, std::vector<i64>(2, 0));
            for (int i = 0; i < m; ++i) sys.coeffs[i][i] = 1;
            ExpectationResult e = linear_forms_expectation(G, sys, ExpectationMode::exhaustive);
            double expect = std::pow((p - 1.0) / p, m);
            CHECK(std::abs(e.value - expect) < 1e-12);
        }
    }
}

TEST_CASE("three-form example respects the deviation bound") {
    FieldContext ctx(1009);
    Subgroup G = ctx.subgroup(504);
    LinearFormSystem sys;
    sys.t = 2;
    sys.m = 3;
    sys.constants = {0, 0, 0};
    sys.coeffs = {{1, 0}, {0, 1}, {1, 1}};
    ExpectationResult e = linear_forms_expectation(G, sys, ExpectationMode::exhaustive);
    CHECK(e.deviation <= linear_forms_deviation_bound(G, 3));
    CHECK(e.value == doctest::Approx(1.0).epsilon(0.25));
}

TEST_CASE("monte carlo agrees with exhaustive within 4 standard errors >= 95% of runs") {
    FieldContext ctx(101);
    Subgroup G = ctx.subgroup(50);
    LinearFormSystem sys;
    sys.t = 2;
    sys.m = 2;
    sys.constants = {1, -1};
    sys.coeffs = {{1, 2}, {1, -1}};
    ExpectationResult exact = linear_forms_expectation(G, sys, ExpectationMode::exhaustive);
    int within = 0;
    for (u64 rep = 0; rep < 100; ++rep) {
        ExpectationResult mc =
            linear_forms_expectation(G, sys, ExpectationMode::montecarlo, 4000, rep);
        if (std::abs(mc.value - exact.value) <= 4.0 * mc.std_error + 1e-12) ++within;
    }
    CHECK(within >= 95);
}

TEST_CASE("monte carlo is seeded") {
    FieldContext ctx(101);
    Subgroup G = ctx.subgroup(50);
    LinearFormSystem sys;
    sys.t = 2;
    sys.m = 1;
    sys.constants = {0};
    sys.coeffs = {{1, 1}};
    auto a = linear_forms_expectation(G, sys, ExpectationMode::montecarlo, 1000, 7);
    auto b = linear_forms_expectation(G, sys, ExpectationMode::montecarlo, 1000, 7);
    CHECK(a.hits == b.hits);
    auto c = linear_forms_expectation(G, sys, ExpectationMode::montecarlo, 1000, 8);
    CHECK(a.hits != c.hits);
}

TEST_CASE("exhaustive budget error") {
    FieldContext ctx(1009);
    Subgroup G = ctx.subgroup(1008);
    LinearFormSystem sys;
    sys.t = 2;
    sys.m = 1;
    sys.constants = {0};
    sys.coeffs = {{1, 1}};
    CHECK_THROWS_AS(
        linear_forms_expectation(G, sys, ExpectationMode::exhaustive, 0, 1, /*budget=*/100),
        resource_error);
}

TEST_CASE("correlation expectation examples") {
    FieldContext f101(101);
    Subgroup half = f101.subgroup(50);
    std::vector<u64> one{13};
    CHECK(correlation_expectation(half, one).value == doctest::Approx(100.0 / 101.0).epsilon(1e-12));

    FieldContext f7(7);
    std::vector<u64> pair{0, 1};
    CHECK(correlation_expectation(f7.subgroup(6), pair).value ==
          doctest::Approx(5.0 / 7.0).epsilon(1e-12));

    std::vector<u64> repeated{3, 3};
    CorrelationResult rep = correlation_expectation(half, repeated);
    CHECK(rep.value == doctest::Approx(10000.0 / 5050.0).epsilon(1e-12));
    REQUIRE(rep.coincidence_profile.size() == 1);
    CHECK(rep.coincidence_profile[0] == std::pair<u64, u64>{3, 2});

    std::vector<u64> nine(9, 1);
    CHECK_THROWS_AS(correlation_expectation(half, nine), domain_error);
}

TEST_CASE("distinct shifts stay near 1 for large subgroups") {
    for (u64 p : {601ULL, 1009ULL}) {
        FieldContext ctx(p);
        std::vector<u64> divs = divisors(p - 1);
        for (u64 d : divs) {
            if (static_cast<double>(d) < std::pow(static_cast<double>(p), 0.8)) continue;
            Subgroup G = ctx.subgroup(d);
            std::vector<u64> shifts{1, 5, 9};
            CorrelationResult res = correlation_expectation(G, shifts);
            double q = 3;
            double bound = 4.0 * std::pow(static_cast<double>(G.index()), q) *
                           (q * std::sqrt(static_cast<double>(p)) + q * q) / static_cast<double>(p);
            CHECK(std::abs(res.value - 1.0) <= bound);
        }
    }
}

TEST_CASE("subset experiment with delta=1 reproduces the census") {
    for (u64 p : primes_upto(60)) {
        if (p < 5) continue;
        FieldContext ctx(p);
        for (u64 d : divisors(p - 1)) {
            Subgroup G = ctx.subgroup(d);
            for (int r = 1; r <= 2; ++r) {
                u64 expected = count_normalized(G, r).total_aps;
                ExperimentStats uni =
                    subset_ap_experiment(G, 1.0, r, SubsetStrategy::uniform, 1, 3);
                CHECK(uni.min_raw == expected);
                ExperimentStats itv =
                    subset_ap_experiment(G, 1.0, r, SubsetStrategy::interval, 1, 3);
                CHECK(itv.min_raw == expected);
            }
        }
    }
}

TEST_CASE("uniform half-density experiment at p=101") {
    FieldContext ctx(101);
    Subgroup G = ctx.subgroup(100);
    u64 total = count_normalized(G, 2).total_aps;
    ExperimentStats st = subset_ap_experiment(G, 0.5, 2, SubsetStrategy::uniform, 200, 11);
    CHECK(st.trials == 200);
    double expected = 0.125 * static_cast<double>(total);
    double se = st.std_raw / std::sqrt(200.0);
    CHECK(std::abs(st.mean_raw - expected) <= 4.0 * se);
    CHECK(st.min_raw <= st.max_raw);

    // deterministic under a fixed seed, regardless of thread count
    ExperimentStats again = subset_ap_experiment(G, 0.5, 2, SubsetStrategy::uniform, 200, 11, 4);
    CHECK(again.mean_raw == st.mean_raw);
    CHECK(again.mean_norm_expectation == st.mean_norm_expectation);
}

TEST_CASE("greedy avoidance builds progression-free witnesses") {
    FieldContext ctx(101);
    Subgroup G = ctx.subgroup(100);
    ExperimentStats st = subset_ap_experiment(G, 0.5, 2, SubsetStrategy::greedy_avoid, 5, 17);
    CHECK(st.min_raw == 0);
    CHECK(st.max_raw == 0);
    CHECK(st.best_apfree_density > 0.0);
    CHECK(st.best_apfree_density <= 0.5 + 1e-12);
}

TEST_CASE("interval strategy is trial-invariant") {
    FieldContext ctx(101);
    Subgroup G = ctx.subgroup(100);
    ExperimentStats st = subset_ap_experiment(G, 0.3, 2, SubsetStrategy::interval, 7, 23);
    CHECK(st.min_raw == st.max_raw);
}

TEST_CASE("strategy parsing") {
    CHECK(parse_strategy("uniform") == SubsetStrategy::uniform);
    CHECK(parse_strategy("greedy_avoid") == SubsetStrategy::greedy_avoid);
    CHECK(parse_strategy("interval") == SubsetStrategy::interval);
    CHECK_THROWS_AS(parse_strategy("nope"), domain_error);
    CHECK_THROWS_AS(parse_strategy(""), domain_error);
}

TEST_CASE("norm expectation includes the diagonal") {
    // A = G: expectation is scale^(r+1) * (total + d) / p^2.
    FieldContext ctx(31);
    Subgroup G = ctx.subgroup(15);
    u64 total = count_normalized(G, 2).total_aps;
    ExperimentStats st = subset_ap_experiment(G, 1.0, 2, SubsetStrategy::uniform, 1, 1);
    double scale = 2.0;
    double expected = std::pow(scale, 3) * static_cast<double>(total + 15) / (31.0 * 31.0);
    CHECK(st.mean_norm_expectation == doctest::Approx(expected).epsilon(1e-12));
}

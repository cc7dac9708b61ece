#pragma once

#include <string>
#include <vector>

#include "apg/field.hpp"
#include "apg/json.hpp"

namespace apg {

/// One census instance: N_all counts x in F_p with 1+sx in G for s = 1..r,
/// N_star excludes x = 0, and the ordered nontrivial (r+1)-term progression
/// count inside G is d * N_star. The main term uses p - r (the r excluded
/// roots of the 1+sx factors are distinct for r < p), so the error term is
/// a pure character-sum quantity bounded by r*sqrt(p).
struct CensusResult {
    u64 p = 0;
    u64 d = 0;
    int r = 0;
    u64 n_all = 0;
    u64 n_star = 0;
    u64 total_aps = 0;
    double main_term = 0.0;
    double error_bound = 0.0;

    bool ap_free() const { return total_aps == 0; }

    static std::string csv_header();
    std::string csv_row() const;
    ojson to_json() const;
};

inline constexpr u64 kBruteOpsBudget = u64(2) << 30;

/// Ordered pairs (a, b), b != 0, with a, a+b, ..., a+rb all in G.
/// Direct loop over a in G and all b; the independent oracle route.
u64 count_brute(const Subgroup& G, int r, u64 ops_budget = kBruteOpsBudget);

/// Single membership-table pass over x; the workhorse route, O(r*p).
CensusResult count_normalized(const Subgroup& G, int r);

/// Character-expansion route: reconstructs N_all as (d/(p-1))^r times the
/// sum of progression character sums over all tuples trivial on G, evaluated
/// with root-of-unity arithmetic (never the membership table). The tuple sum
/// is reorganized as sum over x of products of numerically evaluated
/// geometric character sums, so the full tuple space is summed in O(r*p + k^2).
/// A residual beyond 0.01 from the nearest integer throws verification_error.
CensusResult count_via_characters(const Subgroup& G, int r,
                                  u64 tuple_budget = u64(1) << 62);

/// Main-term/error-term decomposition and the positivity threshold:
/// |N_all - (d/(p-1))^r (p-r)| <= r*sqrt(p), and whenever the main term
/// exceeds the error bound the subgroup must contain progressions.
struct DecompositionReport {
    u64 p = 0;
    u64 d = 0;
    int r = 0;
    u64 n_all = 0;
    u64 total_aps = 0;
    double main_term = 0.0;
    double error_bound = 0.0;
    double residual = 0.0;
    bool decomposition_ok = false;
    bool threshold_met = false;
    bool positivity_ok = false;
    bool pass = false;

    ojson to_json() const;
};

DecompositionReport decomposition_check(const Subgroup& G, int r);
DecompositionReport decomposition_check(const CensusResult& c);

/// Census over every prime in [pmin, pmax] and every divisor d of p-1 with
/// p^window_lo <= d <= p^window_hi. Rows come back sorted by (p, d)
/// regardless of thread count.
std::vector<CensusResult> census_sweep(u64 pmin, u64 pmax, int r,
                                       double window_lo = 0.0, double window_hi = 1.0,
                                       unsigned threads = 1,
                                       u64 table_budget = FieldContext::kDefaultTableBudget);

}  // namespace apg

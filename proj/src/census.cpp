#include "apg/census.hpp"

#include <cmath>
#include <complex>
#include <cstdio>

#include "apg/factor.hpp"
#include "apg/parallel.hpp"

namespace apg {

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void fill_derived(CensusResult& c) {
    c.total_aps = c.d * c.n_star;
    double ratio = static_cast<double>(c.d) / static_cast<double>(c.p - 1);
    c.main_term = std::pow(ratio, c.r) * static_cast<double>(c.p - c.r);
    c.error_bound = static_cast<double>(c.r) * std::sqrt(static_cast<double>(c.p));
}

}  // namespace

std::string CensusResult::csv_header() {
    return "p,d,r,N_all,N_star,total_aps,main_term,error_bound,ap_free";
}

std::string CensusResult::csv_row() const {
    std::string row;
    row += std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(r) + ",";
    row += std::to_string(n_all) + "," + std::to_string(n_star) + "," + std::to_string(total_aps) + ",";
    row += fmt_g(main_term) + "," + fmt_g(error_bound) + ",";
    row += ap_free() ? "true" : "false";
    return row;
}

ojson CensusResult::to_json() const {
    ojson j;
    j["p"] = p;
    j["d"] = d;
    j["r"] = r;
    j["N_all"] = n_all;
    j["N_star"] = n_star;
    j["total_aps"] = total_aps;
    j["main_term"] = main_term;
    j["error_bound"] = error_bound;
    j["ap_free"] = ap_free();
    return j;
}

u64 count_brute(const Subgroup& G, int r, u64 ops_budget) {
    if (r < 1) throw domain_error("count_brute: r must be >= 1");
    const u64 p = G.p();
    if (static_cast<u64>(r) >= p) throw domain_error("count_brute: need r < p");
    u64 ops = saturating_mul(G.order(), saturating_mul(p, r));
    if (ops > ops_budget) throw resource_error("count_brute: p*d*r exceeds the time budget");

    u64 count = 0;
    for (u64 a : G.elements()) {
        for (u64 b = 1; b < p; ++b) {
            u64 term = a;
            bool ok = true;
            for (int s = 1; s <= r; ++s) {
                term += b;
                if (term >= p) term -= p;
                if (!G.contains(term)) {
                    ok = false;
                    break;
                }
            }
            count += ok;
        }
    }
    return count;
}

CensusResult count_normalized(const Subgroup& G, int r) {
    if (r < 1) throw domain_error("count_normalized: r must be >= 1");
    const u64 p = G.p();
    if (static_cast<u64>(r) >= p)
        throw domain_error("count_normalized: need r < p (the normalization collapses)");

    CensusResult c;
    c.p = p;
    c.d = G.order();
    c.r = r;
    for (u64 x = 0; x < p; ++x) {
        u64 y = 1;
        bool ok = true;
        for (int s = 1; s <= r; ++s) {
            y += x;
            if (y >= p) y -= p;
            if (!G.contains(y)) {
                ok = false;
                break;
            }
        }
        if (ok) {
            ++c.n_all;
            c.n_star += x != 0;
        }
    }
    fill_derived(c);
    return c;
}

CensusResult count_via_characters(const Subgroup& G, int r, u64 tuple_budget) {
    if (r < 1) throw domain_error("count_via_characters: r must be >= 1");
    const FieldContext& ctx = G.ctx();
    const u64 p = ctx.p();
    if (static_cast<u64>(r) >= p) throw domain_error("count_via_characters: need r < p");
    const u64 k = G.index();
    if (saturating_pow(k, r) > tuple_budget)
        throw resource_error("count_via_characters: tuple space exceeds enumeration budget");

    const auto& roots = ctx.unit_roots();

    // Geometric sums D[w] = sum_{j<k} zeta_k^{j w}, evaluated numerically so
    // this route never touches the membership table. Summing the per-tuple
    // character sums over all k^r tuples factors as sum_x prod_s D[w_s(x)].
    std::vector<std::complex<double>> D(k, {0.0, 0.0});
    for (u64 w = 0; w < k; ++w) {
        std::complex<double> acc{0.0, 0.0};
        u64 idx = 0;
        for (u64 j = 0; j < k; ++j) {
            acc += roots[idx * G.order()];
            idx += w;
            if (idx >= k) idx -= k;
        }
        D[w] = acc;
    }

    std::complex<double> total{0.0, 0.0};
    for (u64 x = 0; x < p; ++x) {
        std::complex<double> prod{1.0, 0.0};
        bool dead = false;
        u64 y = 1;
        for (int s = 1; s <= r; ++s) {
            y += x;
            if (y >= p) y -= p;
            if (y == 0) {
                dead = true;
                break;
            }
            prod *= D[ctx.dlog(y) % k];
        }
        if (!dead) total += prod;
    }

    const double scale = std::pow(static_cast<double>(k), -r);
    const double value = total.real() * scale;
    const double drift = std::abs(total.imag()) * scale;
    const double rounded = std::nearbyint(value);
    if (std::abs(value - rounded) > 0.01 || drift > 0.01 || rounded < 1.0)
        throw verification_error("count_via_characters: residual outside the rounding guard band");

    CensusResult c;
    c.p = p;
    c.d = G.order();
    c.r = r;
    c.n_all = static_cast<u64>(rounded);
    c.n_star = c.n_all - 1;  // x = 0 always qualifies (every 1+s*0 = 1 lies in G)
    fill_derived(c);
    return c;
}

ojson DecompositionReport::to_json() const {
    ojson j;
    j["p"] = p;
    j["d"] = d;
    j["r"] = r;
    j["N_all"] = n_all;
    j["total_aps"] = total_aps;
    j["main_term"] = main_term;
    j["error_bound"] = error_bound;
    j["residual"] = residual;
    j["decomposition_ok"] = decomposition_ok;
    j["threshold_met"] = threshold_met;
    j["positivity_ok"] = positivity_ok;
    j["pass"] = pass;
    return j;
}

DecompositionReport decomposition_check(const CensusResult& c) {
    DecompositionReport rep;
    rep.p = c.p;
    rep.d = c.d;
    rep.r = c.r;
    rep.n_all = c.n_all;
    rep.total_aps = c.total_aps;
    rep.main_term = c.main_term;
    rep.error_bound = c.error_bound;
    rep.residual = std::abs(static_cast<double>(c.n_all) - c.main_term);
    rep.decomposition_ok = rep.residual <= rep.error_bound + 1e-9;
    rep.threshold_met = rep.main_term > rep.error_bound;
    rep.positivity_ok = !rep.threshold_met || c.total_aps > 0;
    rep.pass = rep.decomposition_ok && rep.positivity_ok;
    return rep;
}

DecompositionReport decomposition_check(const Subgroup& G, int r) {
    return decomposition_check(count_normalized(G, r));
}

std::vector<CensusResult> census_sweep(u64 pmin, u64 pmax, int r, double window_lo,
                                       double window_hi, unsigned threads, u64 table_budget) {
    if (r < 1) throw domain_error("census_sweep: r must be >= 1");
    if (window_lo > window_hi) throw domain_error("census_sweep: empty divisor window");
    std::vector<u64> primes;
    for (u64 q : primes_upto(pmax))
        if (q >= pmin && q >= 3 && static_cast<u64>(r) < q) primes.push_back(q);

    std::vector<std::vector<CensusResult>> per_prime(primes.size());
    parallel_for(primes.size(), threads, [&](u64 i) {
        u64 p = primes[i];
        FieldContext ctx(p, table_budget);
        double lo = std::pow(static_cast<double>(p), window_lo);
        double hi = std::pow(static_cast<double>(p), window_hi);
        for (u64 d : divisors(p - 1)) {
            double dd = static_cast<double>(d);
            if (dd < lo * (1 - 1e-12) || dd > hi * (1 + 1e-12)) continue;
            per_prime[i].push_back(count_normalized(ctx.subgroup(d), r));
        }
    });

    std::vector<CensusResult> rows;
    for (auto& chunk : per_prime)
        for (auto& row : chunk) rows.push_back(row);
    return rows;
}

}  // namespace apg

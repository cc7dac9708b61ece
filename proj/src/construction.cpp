#include "apg/construction.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>

#include "apg/census.hpp"
#include "apg/factor.hpp"
#include "apg/parallel.hpp"

namespace apg {

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

ConstructionConfig ConstructionConfig::make(int r, int r0, int u) {
    if (r < 1) throw domain_error("ConstructionConfig: r must be >= 1");
    ConstructionConfig cfg;
    cfg.r = r;
    cfg.r0 = r0 > 0 ? r0 : std::max(1, static_cast<int>(std::floor(std::log(static_cast<double>(r)))));
    if (cfg.r0 > r) throw domain_error("ConstructionConfig: r0 must be <= r");
    if (u < 1) throw domain_error("ConstructionConfig: u must be >= 1");
    cfg.u = u;
    cfg.delta = 100.0 / static_cast<double>(cfg.r0);
    return cfg;
}

std::optional<u64> ord_tuple(const FieldContext& ctx, u64 t, int r) {
    const u64 p = ctx.p();
    t %= p;
    if (t == 0) throw domain_error("ord_tuple: t must be nonzero mod p");
    if (r < 1 || static_cast<u64>(r) >= p) throw domain_error("ord_tuple: need 1 <= r < p");
    u64 ord = 1;
    for (int s = 1; s <= r; ++s) {
        u64 y = (1 + static_cast<u64>(s) * t) % p;
        if (y == 0) return std::nullopt;
        u64 o = ctx.element_order(y);
        ord = ord / std::gcd(ord, o) * o;  // everything divides p-1, no overflow
    }
    return ord;
}

ojson OrdScanResult::to_json(u64 p, int r) const {
    ojson j;
    j["p"] = p;
    j["r"] = r;
    j["t_min"] = t_min;
    j["ord_min"] = ord_min;
    j["invalid_count"] = invalid_count;
    return j;
}

OrdScanResult min_ord_scan(const FieldContext& ctx, int r, unsigned threads) {
    const u64 p = ctx.p();
    if (r < 1 || static_cast<u64>(r) >= p) throw domain_error("min_ord_scan: need 1 <= r < p");

    struct Chunk {
        u64 t_min = 0, ord_min = 0, invalid = 0;
    };
    unsigned nchunks = std::max(1u, threads);
    std::vector<Chunk> chunks(nchunks);
    u64 n = p - 1;
    u64 span = (n + nchunks - 1) / nchunks;
    parallel_for(nchunks, threads, [&](u64 ci) {
        u64 lo = 1 + ci * span;
        u64 hi = std::min(p, lo + span);
        Chunk c;
        for (u64 t = lo; t < hi; ++t) {
            auto o = ord_tuple(ctx, t, r);
            if (!o) {
                ++c.invalid;
            } else if (c.ord_min == 0 || *o < c.ord_min) {
                c.ord_min = *o;
                c.t_min = t;
            }
        }
        chunks[ci] = c;
    });

    OrdScanResult out;
    for (const Chunk& c : chunks) {
        out.invalid_count += c.invalid;
        if (c.ord_min == 0) continue;
        if (out.ord_min == 0 || c.ord_min < out.ord_min ||
            (c.ord_min == out.ord_min && c.t_min < out.t_min)) {
            out.ord_min = c.ord_min;
            out.t_min = c.t_min;
        }
    }
    return out;
}

std::pair<u64, u64> density_interval(u64 T, double eta) {
    double lo = std::pow(static_cast<double>(T), 0.5 - eta);
    double hi = std::pow(static_cast<double>(T), 0.5 - eta / 2.0);
    u64 qlo = static_cast<u64>(std::ceil(lo - 1e-9 * lo));
    u64 qhi = static_cast<u64>(std::floor(hi + 1e-9 * hi));
    return {qlo, qhi};
}

ojson PrimeDensityResult::to_json(u64 T, double eta) const {
    ojson j;
    j["T"] = T;
    j["eta"] = eta;
    j["count"] = count;
    j["qualifying_interval"] = ojson::array({interval_lo, interval_hi});
    j["interval_prime_count"] = interval_prime_count;
    j["ratio_to_T_over_logT"] = ratio_to_T_over_logT;
    j["ratio_to_eta_T_over_logT"] = ratio_to_eta_T_over_logT;
    return j;
}

PrimeDensityResult prime_density(u64 T, double eta) {
    if (T < 10) throw domain_error("prime_density: T must be >= 10");
    if (!(eta > 0.0 && eta < 0.5)) throw domain_error("prime_density: eta must be in (0, 1/2)");

    PrimeDensityResult res;
    res.interval_lo = std::pow(static_cast<double>(T), 0.5 - eta);
    res.interval_hi = std::pow(static_cast<double>(T), 0.5 - eta / 2.0);
    auto [qlo, qhi] = density_interval(T, eta);
    res.qlo = qlo;
    res.qhi = qhi;

    std::vector<u64> qs;
    if (qlo <= qhi)
        for (u64 q : primes_upto(qhi))
            if (q >= qlo) qs.push_back(q);
    res.interval_prime_count = qs.size();

    // |union A_q| by inclusion-exclusion; subsets with modulus beyond T hold
    // no primes at all and are pruned (qs ascending makes the cut monotone).
    auto count_1_mod = [&](u64 M) {
        u64 c = 0;
        for (u64 n = M + 1; n <= T; n += M) c += is_prime(n);
        return c;
    };
    i64 acc = 0;
    std::function<void(size_t, u64, int)> rec = [&](size_t start, u64 prod, int depth) {
        for (size_t i = start; i < qs.size(); ++i) {
            if (prod > T / qs[i]) break;
            u64 m = prod * qs[i];
            i64 c = static_cast<i64>(count_1_mod(m));
            acc += (depth & 1) ? -c : c;
            rec(i + 1, m, depth + 1);
        }
    };
    rec(0, 1, 0);
    res.count = static_cast<u64>(acc);

    double logT = std::log(static_cast<double>(T));
    res.ratio_to_T_over_logT = static_cast<double>(res.count) * logT / static_cast<double>(T);
    res.ratio_to_eta_T_over_logT = res.ratio_to_T_over_logT / eta;
    return res;
}

std::string ProductDifferenceSpec::label() const {
    auto side = [](const std::vector<std::pair<int, int>>& v) {
        std::string s = "{";
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(v[i].first) + "^" + std::to_string(v[i].second);
        }
        return s + "}";
    };
    return side(e1) + "-" + side(e2);
}

IntPolynomial build_product_difference(const ProductDifferenceSpec& spec,
                                       const ConstructionConfig& cfg) {
    const size_t total = spec.e1.size() + spec.e2.size();
    if (total == 0 || total > static_cast<size_t>(cfg.r0))
        throw domain_error("build_product_difference: need 0 < |E1|+|E2| <= r0");
    std::vector<int> seen;
    for (const auto& side : {spec.e1, spec.e2})
        for (auto [s, us] : side) {
            if (s < 1 || s > cfg.r) throw domain_error("build_product_difference: s out of [1, r]");
            if (us < 1 || us > cfg.u) throw domain_error("build_product_difference: exponent out of [1, u]");
            seen.push_back(s);
        }
    std::sort(seen.begin(), seen.end());
    if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw domain_error("build_product_difference: E1 and E2 must be disjoint");

    auto side_product = [](const std::vector<std::pair<int, int>>& side) {
        IntPolynomial prod = IntPolynomial::constant(1);
        for (auto [s, us] : side) prod = prod * pow(IntPolynomial{1, s}, us);
        return prod;
    };
    IntPolynomial F = side_product(spec.e1) - side_product(spec.e2);

    if (F.is_zero() || F.coeff(0) != 0)
        throw verification_error("build_product_difference: x does not divide F");
    if (F.degree() > cfg.r0 * cfg.u)
        throw verification_error("build_product_difference: degree bound violated");
    BigInt bound = 1;
    for (int i = 0; i < 2 * cfg.r0 * cfg.u; ++i) bound *= cfg.r;
    if (F.height() > bound)
        throw verification_error("build_product_difference: height bound violated");
    return F;
}

void for_each_product_difference(
    const ConstructionConfig& cfg,
    const std::function<void(const ProductDifferenceSpec&, const IntPolynomial&)>& fn) {
    std::vector<int> picked;
    std::function<void(int)> walk = [&](int next_s) {
        if (!picked.empty()) {
            // Split the union into (E1, E2) and run exponents in [1, u].
            const size_t m = picked.size();
            for (u64 split = 0; split < (u64(1) << m); ++split) {
                std::vector<int> exps(m, 1);
                for (;;) {
                    ProductDifferenceSpec spec;
                    for (size_t i = 0; i < m; ++i) {
                        auto& side = (split >> i) & 1 ? spec.e2 : spec.e1;
                        side.emplace_back(picked[i], exps[i]);
                    }
                    fn(spec, build_product_difference(spec, cfg));
                    size_t pos = 0;
                    while (pos < m && exps[pos] == cfg.u) exps[pos++] = 1;
                    if (pos == m) break;
                    ++exps[pos];
                }
            }
        }
        if (static_cast<int>(picked.size()) == cfg.r0) return;
        for (int s = next_s; s <= cfg.r; ++s) {
            picked.push_back(s);
            walk(s + 1);
            picked.pop_back();
        }
    };
    walk(1);
}

std::vector<FamilyPolynomial> difference_family(const ConstructionConfig& cfg, u64 family_budget) {
    // Raw count: sum over union sizes j of C(r, j) * (2u)^j.
    u64 raw = 0;
    {
        u64 binom = 1;
        u64 pw = 1;
        for (int j = 1; j <= cfg.r0; ++j) {
            binom = binom * static_cast<u64>(cfg.r - j + 1) / static_cast<u64>(j);
            pw = saturating_mul(pw, 2 * static_cast<u64>(cfg.u));
            raw += saturating_mul(binom, pw);
        }
    }
    if (raw > family_budget)
        throw resource_error("difference_family: family enumeration exceeds budget");

    std::map<std::vector<BigInt>, std::string> dedup;
    for_each_product_difference(cfg, [&](const ProductDifferenceSpec& spec, const IntPolynomial& F) {
        IntPolynomial f = F.shift_down(F.trailing_zeros());
        if (f.degree() < 1) return;  // pure power of x: no usable factors
        f = f.primitive_part();
        if (f.leading() < 0) f = -f;
        dedup.emplace(f.coeffs(), spec.label());
    });

    // Refine into a pairwise-coprime basis by gcd splitting. Distinct raw
    // members can share an irreducible factor — e.g. for r=4, u=2 both
    // (1+2x)^2(1+4x)-1 and (1+x)^2(1+4x)^2-1 contain 4x^2+5x+2 — and any
    // shared factor would zero a pairwise resultant. Splitting on gcds needs
    // no factorization and keeps every root of every member covered.
    std::vector<FamilyPolynomial> queue;
    for (auto& [coeffs, label] : dedup)
        queue.push_back({IntPolynomial(std::vector<BigInt>(coeffs)), label});
    std::vector<FamilyPolynomial> basis;
    while (!queue.empty()) {
        FamilyPolynomial f = std::move(queue.back());
        queue.pop_back();
        if (f.poly.degree() < 1) continue;
        bool split = false;
        for (size_t i = 0; i < basis.size(); ++i) {
            IntPolynomial g = poly_gcd(f.poly, basis[i].poly);
            if (g.degree() < 1) continue;
            FamilyPolynomial b = std::move(basis[i]);
            basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
            IntPolynomial b_rest = div_exact_poly(b.poly, g).primitive_part();
            IntPolynomial f_rest = div_exact_poly(f.poly, g).primitive_part();
            if (b_rest.degree() >= 1) queue.push_back({b_rest, b.label});
            if (f_rest.degree() >= 1) queue.push_back({f_rest, f.label});
            queue.push_back({g, "gcd(" + b.label + "," + f.label + ")"});
            split = true;
            break;
        }
        if (!split) basis.push_back(std::move(f));
    }
    for (auto& entry : basis)
        if (entry.poly.leading() < 0) entry.poly = -entry.poly;
    std::sort(basis.begin(), basis.end(), [](const FamilyPolynomial& a, const FamilyPolynomial& b) {
        if (a.poly.degree() != b.poly.degree()) return a.poly.degree() < b.poly.degree();
        return a.poly.coeffs() < b.poly.coeffs();
    });
    return basis;
}

ojson CertificateResult::to_json() const {
    ojson j;
    ojson c;
    c["r"] = cfg.r;
    c["r0"] = cfg.r0;
    c["u"] = cfg.u;
    c["delta"] = cfg.delta;
    j["config"] = c;
    j["poly_count"] = poly_count;
    j["max_height"] = max_height.str();
    j["height_bound"] = height_bound.str();
    j["resultant_count"] = resultant_count;
    j["Delta"] = delta_primes;
    j["all_nonzero"] = all_nonzero;
    j["raw_poly_count"] = raw_poly_count;
    j["max_abs_resultant"] = max_abs_resultant.str();
    return j;
}

CertificateResult bad_prime_certificate(const ConstructionConfig& cfg, u64 prime_budget,
                                        u64 family_budget) {
    CertificateResult res;
    res.cfg = cfg;
    res.height_bound = 1;
    for (int i = 0; i < 2 * cfg.r0 * cfg.u; ++i) res.height_bound *= cfg.r;
    res.max_height = 0;
    res.max_abs_resultant = 0;

    // Raw pass for the height/degree accounting (build_product_difference
    // re-checks the bounds on every instance).
    for_each_product_difference(cfg, [&](const ProductDifferenceSpec&, const IntPolynomial& F) {
        ++res.raw_poly_count;
        BigInt h = F.height();
        if (h > res.max_height) res.max_height = h;
    });

    std::vector<FamilyPolynomial> family = difference_family(cfg, family_budget);
    res.poly_count = family.size();

    std::vector<u64> small_primes = primes_upto(prime_budget);
    std::vector<bool> in_delta(small_primes.size(), false);
    for (size_t i = 0; i < family.size(); ++i) {
        for (size_t j = i + 1; j < family.size(); ++j) {
            BigInt R = resultant(family[i].poly, family[j].poly);
            ++res.resultant_count;
            if (R == 0)
                throw verification_error("bad_prime_certificate: zero resultant between " +
                                         family[i].label + " and " + family[j].label);
            if (R < 0) R = -R;
            if (R > res.max_abs_resultant) res.max_abs_resultant = R;
            for (size_t qi = 0; qi < small_primes.size(); ++qi)
                if (!in_delta[qi] && R % small_primes[qi] == 0) in_delta[qi] = true;
        }
    }
    for (size_t qi = 0; qi < small_primes.size(); ++qi)
        if (in_delta[qi]) res.delta_primes.push_back(small_primes[qi]);
    return res;
}

ojson IndependenceResult::to_json() const {
    ojson j;
    j["z"] = z.str();
    j["r"] = r;
    j["rank"] = rank;
    j["subset"] = values;
    j["subset_s"] = chosen_s;
    j["excluded_s"] = excluded_s;
    return j;
}

IndependenceResult mult_independent_subset(const Rational& z, int r) {
    if (z.num == 0) throw domain_error("mult_independent_subset: z must be nonzero");
    if (r < 1) throw domain_error("mult_independent_subset: r must be >= 1");
    const i64 z_num = z.num;
    const i64 z_den = z.den;

    IndependenceResult res;
    res.z = z;
    res.r = r;

    // Exponent vector of |1+sz| over the primes of numerator and denominator.
    struct Entry {
        int s;
        std::string value;
        std::vector<std::pair<u64, i64>> exps;  // (prime, exponent), num minus den
    };
    std::vector<Entry> entries;
    std::vector<u64> all_primes;
    for (int s = 1; s <= r; ++s) {
        i128 a = static_cast<i128>(z_den) + static_cast<i128>(s) * z_num;
        if (a == 0) {
            res.excluded_s.push_back(s);
            continue;
        }
        bool neg = a < 0;
        if (neg) a = -a;
        if (a > static_cast<i128>(INT64_MAX))
            throw resource_error("mult_independent_subset: numerator exceeds factoring budget");
        u64 num = static_cast<u64>(a);
        u64 den = static_cast<u64>(z_den);
        u64 gg = std::gcd(num, den);
        num /= gg;
        den /= gg;

        Entry e;
        e.s = s;
        std::string num_str = (neg ? "-" : "") + std::to_string(num);
        e.value = den == 1 ? num_str : num_str + "/" + std::to_string(den);
        std::map<u64, i64> vec;
        if (num > 1)
            for (auto [q, k] : factor_powers(num)) vec[q] += k;
        if (den > 1)
            for (auto [q, k] : factor_powers(den)) vec[q] -= k;
        for (auto [q, k] : vec)
            if (k != 0) {
                e.exps.emplace_back(q, k);
                all_primes.push_back(q);
            }
        entries.push_back(std::move(e));
    }
    std::sort(all_primes.begin(), all_primes.end());
    all_primes.erase(std::unique(all_primes.begin(), all_primes.end()), all_primes.end());

    // Greedy rank: keep an integer row-echelon basis; a candidate joins iff
    // elimination leaves it nonzero.
    const size_t dim = all_primes.size();
    std::vector<std::vector<BigInt>> basis;       // reduced rows
    std::vector<size_t> pivot_col;
    for (const Entry& e : entries) {
        std::vector<BigInt> row(dim, 0);
        for (auto [q, k] : e.exps) {
            size_t idx = static_cast<size_t>(
                std::lower_bound(all_primes.begin(), all_primes.end(), q) - all_primes.begin());
            row[idx] = k;
        }
        for (size_t b = 0; b < basis.size(); ++b) {
            const BigInt v = row[pivot_col[b]];  // copy: the loop overwrites the slot
            if (v == 0) continue;
            const BigInt piv = basis[b][pivot_col[b]];
            for (size_t c = 0; c < dim; ++c) row[c] = row[c] * piv - basis[b][c] * v;
        }
        size_t lead = dim;
        for (size_t c = 0; c < dim; ++c)
            if (row[c] != 0) {
                lead = c;
                break;
            }
        if (lead == dim) continue;  // dependent on the chosen set
        basis.push_back(std::move(row));
        pivot_col.push_back(lead);
        res.chosen_s.push_back(e.s);
        res.values.push_back(e.value);
    }
    res.rank = basis.size();
    return res;
}

std::string ApFreeRow::csv_header() {
    return "p,r,best_apfree_d,best_apfree_exponent,prop2_threshold_exponent,divisors_tested";
}

std::string ApFreeRow::csv_row() const {
    std::string row = std::to_string(p) + "," + std::to_string(r) + "," + std::to_string(best_d);
    row += "," + fmt_g(best_exponent) + "," + fmt_g(threshold_exponent) + ",";
    row += std::to_string(divisors_tested);
    return row;
}

ojson ApFreeRow::to_json() const {
    ojson j;
    j["p"] = p;
    j["r"] = r;
    j["best_apfree_d"] = best_d;
    j["best_apfree_exponent"] = best_exponent;
    j["prop2_threshold_exponent"] = threshold_exponent;
    j["divisors_tested"] = divisors_tested;
    return j;
}

std::vector<ApFreeRow> apfree_search(u64 pmin, u64 pmax, int r, double window_lo,
                                     double window_hi, unsigned threads, u64 table_budget) {
    if (r < 1) throw domain_error("apfree_search: r must be >= 1");
    std::vector<u64> primes;
    for (u64 q : primes_upto(pmax))
        if (q >= pmin && q >= 3 && static_cast<u64>(r) < q) primes.push_back(q);

    std::vector<ApFreeRow> rows(primes.size());
    parallel_for(primes.size(), threads, [&](u64 i) {
        const u64 p = primes[i];
        FieldContext ctx(p, table_budget);
        ApFreeRow row;
        row.p = p;
        row.r = r;
        const double pd = static_cast<double>(p);
        // Order where the main term equals the error bound.
        double dstar = (pd - 1.0) * std::pow(static_cast<double>(r) * std::sqrt(pd) / (pd - r),
                                             1.0 / static_cast<double>(r));
        row.threshold_exponent = std::log(dstar) / std::log(pd);

        double lo = std::pow(pd, window_lo), hi = std::pow(pd, window_hi);
        std::vector<u64> divs = divisors(p - 1);
        for (auto it = divs.rbegin(); it != divs.rend(); ++it) {
            double dd = static_cast<double>(*it);
            if (dd < lo * (1 - 1e-12) || dd > hi * (1 + 1e-12)) continue;
            ++row.divisors_tested;
            CensusResult c = count_normalized(ctx.subgroup(*it), r);
            if (c.ap_free()) {
                row.best_d = *it;
                row.best_exponent = std::log(dd) / std::log(pd);
                break;  // descending walk: first hit is the largest
            }
        }
        rows[i] = row;
    });
    return rows;
}

}  // namespace apg

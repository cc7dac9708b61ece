#include "apg/characters.hpp"

#include <algorithm>
#include <cmath>

#include "apg/parallel.hpp"

namespace apg {

std::vector<Character> characters_trivial_on(const Subgroup& G) {
    std::vector<Character> out;
    u64 k = G.index();
    out.reserve(k);
    for (u64 j = 0; j < k; ++j) out.push_back({&G.ctx(), j * G.order()});
    return out;
}

double indicator_expansion_residual(const Subgroup& G, u64 x) {
    const FieldContext& ctx = G.ctx();
    u64 p = ctx.p();
    if (x >= p) throw domain_error("indicator_expansion_residual: x out of range");
    std::complex<double> sum{0.0, 0.0};
    if (x != 0) {
        const auto& roots = ctx.unit_roots();
        u64 t = ctx.dlog(x);
        for (u64 j = 0; j < G.index(); ++j) sum += roots[(j * G.order() * t) % (p - 1)];
    }
    double indicator = (x != 0 && G.contains(x)) ? 1.0 : 0.0;
    sum *= static_cast<double>(G.order()) / static_cast<double>(p - 1);
    return std::abs(sum - indicator);
}

std::complex<double> progression_char_sum(const CharTuple& tuple) {
    if (tuple.chars.empty()) throw domain_error("progression_char_sum: empty tuple");
    const FieldContext& ctx = *tuple.chars[0].ctx;
    for (const Character& c : tuple.chars)
        if (c.ctx != &ctx) throw domain_error("progression_char_sum: mixed contexts");
    const u64 p = ctx.p();
    const u64 m = p - 1;
    const int r = static_cast<int>(tuple.chars.size());
    if (static_cast<u64>(r) >= p) throw domain_error("progression_char_sum: need r < p");
    const auto& roots = ctx.unit_roots();

    std::complex<double> acc{0.0, 0.0};
    for (u64 x = 0; x < p; ++x) {
        u64 esum = 0;
        bool dead = false;
        for (int s = 1; s <= r; ++s) {
            u64 y = (1 + static_cast<u64>(s) * x) % p;
            if (y == 0) {
                dead = true;
                break;
            }
            esum += (tuple.chars[s - 1].e * ctx.dlog(y)) % m;
        }
        if (!dead) acc += roots[esum % m];
    }
    return acc;
}

ojson WeilReport::to_json() const {
    ojson j;
    j["p"] = p;
    j["d"] = d;
    j["r"] = r;
    j["tuples_checked"] = tuples_checked;
    j["max_abs_sum"] = max_abs_sum;
    j["worst_ratio"] = worst_ratio;
    j["pass"] = pass;
    return j;
}

namespace {

struct TupleGrid {
    u64 k = 0;                         // (p-1)/d, exponents live in [0, k)
    std::vector<std::vector<u32>> w;   // w[s][i] = dlog(1+(s+1)x_i) mod k, valid x only
    std::vector<double> zre, zim;      // k-th roots of unity, exact slices of the p-1 table
};

TupleGrid build_grid(const Subgroup& G, int r) {
    const FieldContext& ctx = G.ctx();
    const u64 p = ctx.p();
    TupleGrid grid;
    grid.k = G.index();
    const auto& roots = ctx.unit_roots();
    grid.zre.resize(grid.k);
    grid.zim.resize(grid.k);
    for (u64 t = 0; t < grid.k; ++t) {
        grid.zre[t] = roots[t * G.order()].real();
        grid.zim[t] = roots[t * G.order()].imag();
    }
    grid.w.assign(r, {});
    for (auto& col : grid.w) col.reserve(p);
    std::vector<u32> row(r);
    for (u64 x = 0; x < p; ++x) {
        bool ok = true;
        for (int s = 1; s <= r; ++s) {
            u64 y = (1 + static_cast<u64>(s) * x) % p;
            if (y == 0) {
                ok = false;
                break;
            }
            row[s - 1] = static_cast<u32>(ctx.dlog(y) % grid.k);
        }
        if (ok)
            for (int s = 0; s < r; ++s) grid.w[s].push_back(row[s]);
    }
    return grid;
}

struct MaxStats {
    double max_abs2 = 0.0;    // max |S|^2
    double max_ratio2 = 0.0;  // max |S|^2 / |I|^2

    void feed(double re, double im, int I) {
        double m2 = re * re + im * im;
        if (m2 > max_abs2) max_abs2 = m2;
        double r2 = m2 / static_cast<double>(I * I);
        if (r2 > max_ratio2) max_ratio2 = r2;
    }
    void merge(const MaxStats& o) {
        max_abs2 = std::max(max_abs2, o.max_abs2);
        max_ratio2 = std::max(max_ratio2, o.max_ratio2);
    }
};

// All length-k discrete-Fourier evaluations S(j) = sum_w a[w] zeta^(j w),
// j = 0..k-1, fed into stats with |I| = base_I + (j != 0). Index arithmetic
// is incremental, two output frequencies per pass over a[].
void dft_all_rows(const std::vector<double>& are, const std::vector<double>& aim,
                  const TupleGrid& g, int base_I, bool skip_zero, MaxStats& stats) {
    const u64 k = g.k;
    u64 j = 0;
    if (skip_zero && base_I == 0) j = 1;
    for (; j + 1 < k; j += 2) {
        double s0re = 0, s0im = 0, s1re = 0, s1im = 0;
        u32 i0 = 0, i1 = 0;
        const u32 k32 = static_cast<u32>(k);
        const u32 st0 = static_cast<u32>(j), st1 = static_cast<u32>(j + 1);
        for (u64 wv = 0; wv < k; ++wv) {
            const double ar = are[wv], ai = aim[wv];
            s0re += ar * g.zre[i0] - ai * g.zim[i0];
            s0im += ar * g.zim[i0] + ai * g.zre[i0];
            s1re += ar * g.zre[i1] - ai * g.zim[i1];
            s1im += ar * g.zim[i1] + ai * g.zre[i1];
            i0 += st0;
            if (i0 >= k32) i0 -= k32;
            i1 += st1;
            if (i1 >= k32) i1 -= k32;
        }
        stats.feed(s0re, s0im, base_I + (j != 0));
        stats.feed(s1re, s1im, base_I + 1);
    }
    for (; j < k; ++j) {
        double sre = 0, sim = 0;
        u32 idx = 0;
        const u32 k32 = static_cast<u32>(k);
        const u32 st = static_cast<u32>(j);
        for (u64 wv = 0; wv < k; ++wv) {
            sre += are[wv] * g.zre[idx] - aim[wv] * g.zim[idx];
            sim += are[wv] * g.zim[idx] + aim[wv] * g.zre[idx];
            idx += st;
            if (idx >= k32) idx -= k32;
        }
        stats.feed(sre, sim, base_I + (j != 0));
    }
}

MaxStats exhaustive_r1(const TupleGrid& g) {
    std::vector<double> are(g.k, 0.0), aim(g.k, 0.0);
    for (u32 wv : g.w[0]) are[wv] += 1.0;
    MaxStats stats;
    dft_all_rows(are, aim, g, 0, /*skip_zero=*/true, stats);
    return stats;
}

MaxStats exhaustive_r2(const TupleGrid& g, unsigned threads) {
    const u64 k = g.k;
    const size_t n = g.w[0].size();
    const u64 half = k / 2 + 1;  // conjugate tuples share |S|
    std::vector<MaxStats> partial(std::max<u64>(threads, 1));
    std::atomic<unsigned> slot{0};
    parallel_ranges(half, threads, [&](u64 lo, u64 hi) {
        MaxStats local;
        std::vector<u32> phase(n);
        for (size_t i = 0; i < n; ++i) phase[i] = static_cast<u32>((lo * g.w[0][i]) % k);
        std::vector<double> are(k), aim(k);
        for (u64 j1 = lo; j1 < hi; ++j1) {
            if (j1 != lo)
                for (size_t i = 0; i < n; ++i) {
                    phase[i] += g.w[0][i];
                    if (phase[i] >= k) phase[i] -= k;
                }
            std::fill(are.begin(), are.end(), 0.0);
            std::fill(aim.begin(), aim.end(), 0.0);
            for (size_t i = 0; i < n; ++i) {
                are[g.w[1][i]] += g.zre[phase[i]];
                aim[g.w[1][i]] += g.zim[phase[i]];
            }
            dft_all_rows(are, aim, g, j1 != 0 ? 1 : 0, /*skip_zero=*/true, local);
        }
        partial[slot.fetch_add(1)] = local;
    });
    MaxStats stats;
    for (const auto& s : partial) stats.merge(s);
    return stats;
}

MaxStats exhaustive_r3(const TupleGrid& g, unsigned threads) {
    const u64 k = g.k;
    const size_t n = g.w[0].size();
    const u64 half = k / 2 + 1;
    std::vector<MaxStats> partial(std::max<u64>(threads, 1));
    std::atomic<unsigned> slot{0};
    parallel_ranges(half, threads, [&](u64 lo, u64 hi) {
        MaxStats local;
        std::vector<u32> phase1(n), phase12(n);
        for (size_t i = 0; i < n; ++i) phase1[i] = static_cast<u32>((lo * g.w[0][i]) % k);
        std::vector<double> are(k), aim(k);
        for (u64 j1 = lo; j1 < hi; ++j1) {
            if (j1 != lo)
                for (size_t i = 0; i < n; ++i) {
                    phase1[i] += g.w[0][i];
                    if (phase1[i] >= k) phase1[i] -= k;
                }
            phase12 = phase1;
            for (u64 j2 = 0; j2 < k; ++j2) {
                if (j2 != 0)
                    for (size_t i = 0; i < n; ++i) {
                        phase12[i] += g.w[1][i];
                        if (phase12[i] >= k) phase12[i] -= k;
                    }
                std::fill(are.begin(), are.end(), 0.0);
                std::fill(aim.begin(), aim.end(), 0.0);
                for (size_t i = 0; i < n; ++i) {
                    are[g.w[2][i]] += g.zre[phase12[i]];
                    aim[g.w[2][i]] += g.zim[phase12[i]];
                }
                int base_I = (j1 != 0 ? 1 : 0) + (j2 != 0 ? 1 : 0);
                dft_all_rows(are, aim, g, base_I, /*skip_zero=*/true, local);
            }
        }
        partial[slot.fetch_add(1)] = local;
    });
    MaxStats stats;
    for (const auto& s : partial) stats.merge(s);
    return stats;
}

// Direct evaluation of one exponent tuple from the grid; exact mirror of
// progression_char_sum restricted to characters trivial on G.
void eval_tuple_direct(const TupleGrid& g, const std::vector<u64>& j, MaxStats& stats) {
    const int r = static_cast<int>(j.size());
    int I = 0;
    for (u64 js : j) I += js != 0;
    if (I == 0) return;
    const size_t n = g.w[0].size();
    double sre = 0, sim = 0;
    for (size_t i = 0; i < n; ++i) {
        u64 esum = 0;
        for (int s = 0; s < r; ++s) esum += (j[s] * g.w[s][i]) % g.k;
        esum %= g.k;
        sre += g.zre[esum];
        sim += g.zim[esum];
    }
    stats.feed(sre, sim, I);
}

}  // namespace

WeilReport verify_weil(const Subgroup& G, int r, u64 cap, u64 seed, unsigned threads,
                       u64 ops_budget) {
    if (r < 1) throw domain_error("verify_weil: r must be >= 1");
    const u64 p = G.p();
    if (static_cast<u64>(r) >= p) throw domain_error("verify_weil: need r < p");

    WeilReport rep;
    rep.p = p;
    rep.d = G.order();
    rep.r = r;

    const u64 k = G.index();
    const u64 total = saturating_pow(k, r);
    const u64 nontrivial = total - 1;
    if (nontrivial == 0) return rep;  // only the all-trivial tuple: vacuous pass

    const bool exhaustive = (cap == 0) || (nontrivial <= cap);
    if (exhaustive) {
        // Inner-DFT cost of the batched kernels: half the leading exponents
        // times a length-k transform per remaining tuple slice.
        u64 est = r == 1 ? saturating_mul(k, k)
                         : saturating_mul(saturating_pow(k, r - 1) / 2 + 1,
                                          saturating_mul(k, k) + p);
        if (est > ops_budget)
            throw resource_error("verify_weil: exhaustive run exceeds the ops budget; "
                                 "pass a sampling cap");
    }

    TupleGrid grid = build_grid(G, r);
    MaxStats stats;
    if (exhaustive) {
        if (r == 1) {
            stats = exhaustive_r1(grid);
        } else if (r == 2) {
            stats = exhaustive_r2(grid, threads);
        } else if (r == 3) {
            stats = exhaustive_r3(grid, threads);
        } else {
            u64 ops = saturating_mul(total, saturating_mul(grid.w[0].size(), r));
            if (ops > ops_budget)
                throw resource_error("verify_weil: tuple space too large; pass a sampling cap");
            std::vector<u64> j(r, 0);
            for (;;) {  // odometer over exponent tuples
                eval_tuple_direct(grid, j, stats);
                int pos = r - 1;
                while (pos >= 0 && j[pos] + 1 == k) j[pos--] = 0;
                if (pos < 0) break;
                ++j[pos];
            }
        }
        rep.tuples_checked = nontrivial;
    } else {
        std::mt19937_64 rng(derive_seed(seed, 0));
        std::vector<u64> j(r);
        for (u64 c = 0; c < cap; ++c) {
            u64 nz;
            do {
                nz = 0;
                for (int s = 0; s < r; ++s) nz += (j[s] = uniform_below(rng, k)) != 0;
            } while (nz == 0);
            eval_tuple_direct(grid, j, stats);
        }
        rep.tuples_checked = cap;
    }

    rep.max_abs_sum = std::sqrt(stats.max_abs2);
    rep.worst_ratio = std::sqrt(stats.max_ratio2 / static_cast<double>(p));
    rep.pass = rep.worst_ratio <= 1.0 + 1e-9;
    return rep;
}

}  // namespace apg

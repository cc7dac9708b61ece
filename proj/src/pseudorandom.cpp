#include "apg/pseudorandom.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "apg/parallel.hpp"

namespace apg {

ojson GtParameters::to_json() const {
    ojson j;
    j["kappa"] = kappa.str();
    j["m0"] = m0;
    j["exponent"] = subgroup_exponent.str();
    return j;
}

GtParameters gt_parameters(int r) {
    if (r < 1 || r > 30) throw domain_error("gt_parameters: r must be in [1, 30]");
    GtParameters g;
    g.r = r;
    const i64 pow2 = i64(1) << (r - 1);  // 2^(r-1)
    g.m0 = static_cast<i64>(r) * pow2;
    g.kappa = Rational(1, static_cast<i64>(r) * pow2 * 4);  // 1/(r*2^(r+1))
    g.subgroup_exponent = Rational(4 * g.m0 - 1, 4 * g.m0);
    return g;
}

void LinearFormSystem::validate() const {
    if (t < 1) throw domain_error("LinearFormSystem: need t >= 1");
    if (m < 1) throw domain_error("LinearFormSystem: need m >= 1");
    if (static_cast<int>(coeffs.size()) != m || static_cast<int>(constants.size()) != m)
        throw domain_error("LinearFormSystem: row count mismatch");
    for (const auto& row : coeffs) {
        if (static_cast<int>(row.size()) != t) throw domain_error("LinearFormSystem: row width mismatch");
        bool nonzero = false;
        for (i64 c : row) {
            if (c < -coeff_bound || c > coeff_bound)
                throw domain_error("LinearFormSystem: coefficient outside [-L, L]");
            nonzero |= c != 0;
        }
        if (!nonzero) throw domain_error("LinearFormSystem: zero coefficient row");
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            bool collinear = true;
            for (int a = 0; a < t && collinear; ++a)
                for (int b = a + 1; b < t && collinear; ++b)
                    collinear = coeffs[i][a] * coeffs[j][b] == coeffs[i][b] * coeffs[j][a];
            if (t == 1) collinear = true;  // nonzero scalars are always proportional
            if (collinear) throw domain_error("LinearFormSystem: collinear coefficient rows");
        }
}

LinearFormSystem LinearFormSystem::random_valid(std::mt19937_64& rng, int t, int m, i64 bound) {
    LinearFormSystem sys;
    sys.t = t;
    sys.m = m;
    sys.coeff_bound = bound;
    const u64 width = static_cast<u64>(2 * bound + 1);
    for (;;) {
        sys.constants.assign(m, 0);
        sys.coeffs.assign(m, std::vector<i64>(t, 0));
        for (int i = 0; i < m; ++i) {
            sys.constants[i] = static_cast<i64>(uniform_below(rng, width)) - bound;
            for (int j = 0; j < t; ++j)
                sys.coeffs[i][j] = static_cast<i64>(uniform_below(rng, width)) - bound;
        }
        try {
            sys.validate();
            return sys;
        } catch (const domain_error&) {
            // resample
        }
    }
}

ojson LinearFormSystem::to_json() const {
    ojson j;
    j["t"] = t;
    j["m"] = m;
    j["b"] = constants;
    j["L"] = coeffs;
    return j;
}

namespace {

u64 reduce_mod(i64 v, u64 p) {
    i64 r = v % static_cast<i64>(p);
    if (r < 0) r += static_cast<i64>(p);
    return static_cast<u64>(r);
}

}  // namespace

ExpectationResult linear_forms_expectation(const Subgroup& G, const LinearFormSystem& sys,
                                           ExpectationMode mode, u64 samples, u64 seed,
                                           u64 point_budget) {
    sys.validate();
    const u64 p = G.p();
    const int t = sys.t, m = sys.m;
    std::vector<std::vector<u64>> L(m, std::vector<u64>(t));
    std::vector<u64> b(m);
    for (int i = 0; i < m; ++i) {
        b[i] = reduce_mod(sys.constants[i], p);
        for (int j = 0; j < t; ++j) L[i][j] = reduce_mod(sys.coeffs[i][j], p);
    }

    ExpectationResult res;
    const double scale = static_cast<double>(G.index());

    if (mode == ExpectationMode::exhaustive) {
        u64 points = 1;
        for (int j = 0; j < t; ++j) {
            points = saturating_mul(points, p);
            if (points > point_budget)
                throw resource_error("linear_forms_expectation: p^t exceeds the exhaustive budget");
        }
        // Outer odometer over x_0..x_{t-2}; the innermost axis advances each
        // form by its last coefficient.
        std::vector<u64> x(t > 1 ? t - 1 : 0, 0);
        std::vector<u64> vals(m);
        u64 hits = 0;
        for (;;) {
            for (int i = 0; i < m; ++i) {
                u64 v = b[i];
                for (int j = 0; j + 1 < t; ++j) v = (v + mulmod(L[i][j], x[j], p)) % p;
                vals[i] = v;
            }
            for (u64 xin = 0; xin < p; ++xin) {
                bool ok = true;
                for (int i = 0; i < m; ++i) {
                    if (!G.contains(vals[i])) {
                        ok = false;
                        break;
                    }
                }
                hits += ok;
                for (int i = 0; i < m; ++i) {
                    vals[i] += L[i][t - 1];
                    if (vals[i] >= p) vals[i] -= p;
                }
            }
            int pos = t - 2;
            while (pos >= 0 && ++x[pos] == p) x[pos--] = 0;
            if (pos < 0) break;
        }
        res.hits = hits;
        res.points = points;
        res.value = std::pow(scale, m) * static_cast<double>(hits) / static_cast<double>(points);
        res.std_error = 0.0;
    } else {
        if (samples == 0) throw domain_error("linear_forms_expectation: need samples > 0");
        std::mt19937_64 rng(derive_seed(seed, 0));
        u64 hits = 0;
        std::vector<u64> x(t);
        for (u64 n = 0; n < samples; ++n) {
            for (int j = 0; j < t; ++j) x[j] = uniform_below(rng, p);
            bool ok = true;
            for (int i = 0; i < m && ok; ++i) {
                u64 v = b[i];
                for (int j = 0; j < t; ++j) v = (v + mulmod(L[i][j], x[j], p)) % p;
                ok = G.contains(v);
            }
            hits += ok;
        }
        res.hits = hits;
        res.points = samples;
        double phat = static_cast<double>(hits) / static_cast<double>(samples);
        res.value = std::pow(scale, m) * phat;
        res.std_error =
            std::pow(scale, m) * std::sqrt(phat * (1.0 - phat) / static_cast<double>(samples));
    }
    res.deviation = std::abs(res.value - 1.0);
    return res;
}

double linear_forms_deviation_bound(const Subgroup& G, int m) {
    const double p = static_cast<double>(G.p());
    const double scale = static_cast<double>(G.index());
    const double md = static_cast<double>(m);
    return 4.0 * std::pow(scale, m) * (md * std::sqrt(p) + md * md) / p;
}

CorrelationResult correlation_expectation(const Subgroup& G, std::span<const u64> shifts, int q0) {
    const u64 p = G.p();
    const int q = static_cast<int>(shifts.size());
    if (q < 1) throw domain_error("correlation_expectation: need at least one shift");
    if (q > q0) throw domain_error("correlation_expectation: more shifts than the configured q0");

    std::vector<u64> h(shifts.begin(), shifts.end());
    for (u64& v : h) v %= p;

    CorrelationResult res;
    std::map<u64, u64> mult;
    for (u64 v : h) ++mult[v];
    res.coincidence_profile.assign(mult.begin(), mult.end());

    u64 hits = 0;
    for (u64 x = 0; x < p; ++x) {
        bool ok = true;
        for (u64 v : h) {
            u64 y = x + v;
            if (y >= p) y -= p;
            if (!G.contains(y)) {
                ok = false;
                break;
            }
        }
        hits += ok;
    }
    res.hits = hits;
    res.value = std::pow(static_cast<double>(G.index()), q) * static_cast<double>(hits) /
                static_cast<double>(p);
    return res;
}

SubsetStrategy parse_strategy(const std::string& name) {
    if (name == "uniform") return SubsetStrategy::uniform;
    if (name == "greedy_avoid") return SubsetStrategy::greedy_avoid;
    if (name == "interval") return SubsetStrategy::interval;
    throw domain_error("unknown subset strategy: " + name);
}

std::string strategy_name(SubsetStrategy s) {
    switch (s) {
        case SubsetStrategy::uniform: return "uniform";
        case SubsetStrategy::greedy_avoid: return "greedy_avoid";
        case SubsetStrategy::interval: return "interval";
    }
    throw domain_error("unknown subset strategy value");
}

ojson ExperimentStats::to_json() const {
    ojson j;
    j["p"] = p;
    j["d"] = d;
    j["r"] = r;
    j["delta"] = delta;
    j["strategy"] = strategy;
    j["trials"] = trials;
    j["seed"] = seed;
    j["mean_norm_expectation"] = mean_norm_expectation;
    j["min_raw"] = min_raw;
    j["mean_raw"] = mean_raw;
    j["max_raw"] = max_raw;
    j["best_apfree_density"] = best_apfree_density;
    j["std_raw"] = std_raw;
    return j;
}

u64 count_subset_aps(u64 p, const std::vector<u64>& member_bits,
                     const std::vector<u64>& subset, int r) {
    auto in = [&](u64 x) { return (member_bits[x >> 6] >> (x & 63)) & 1; };
    u64 count = 0;
    for (u64 a : subset) {
        for (u64 b = 1; b < p; ++b) {
            u64 term = a;
            bool ok = true;
            for (int s = 1; s <= r; ++s) {
                term += b;
                if (term >= p) term -= p;
                if (!in(term)) {
                    ok = false;
                    break;
                }
            }
            count += ok;
        }
    }
    return count;
}

namespace {

struct TrialOutcome {
    u64 raw = 0;
    u64 size = 0;
    double norm = 0.0;
};

// True iff adding c to A closes some nontrivial (r+1)-term progression whose
// other terms all lie in A. Every such progression holds c at some position j
// and an existing u at another position i, which pins the common difference.
bool completes_progression(u64 p, const std::vector<u64>& bits, const std::vector<u64>& members,
                           u64 c, int r, const std::vector<u64>& diff_inv) {
    auto in = [&](u64 x) { return (bits[x >> 6] >> (x & 63)) & 1; };
    for (u64 u : members) {
        for (int j = 0; j <= r; ++j) {
            for (int i = 0; i <= r; ++i) {
                if (i == j) continue;
                u64 du = u >= c ? u - c : u + p - c;
                u64 b = mulmod(du, diff_inv[static_cast<size_t>(i - j + r)], p);
                bool ap = true;
                for (int s = 0; s <= r && ap; ++s) {
                    if (s == j) continue;
                    i64 off = s - j;
                    u64 term = c;
                    if (off > 0)
                        term = (term + mulmod(b, static_cast<u64>(off), p)) % p;
                    else
                        term = (term + p - mulmod(b, static_cast<u64>(-off), p) % p) % p;
                    ap = in(term);
                }
                if (ap) return true;
            }
        }
    }
    return false;
}

TrialOutcome run_trial(const Subgroup& G, double delta, u64 target, int r,
                       SubsetStrategy strategy, u64 trial_seed) {
    const u64 p = G.p();
    std::vector<u64> subset;
    std::vector<u64> bits((p + 63) / 64, 0);
    auto add = [&](u64 x) {
        subset.push_back(x);
        bits[x >> 6] |= u64(1) << (x & 63);
    };

    std::mt19937_64 rng(trial_seed);
    if (strategy == SubsetStrategy::uniform) {
        // Independent inclusion at rate delta, so an ordered progression with
        // r+1 distinct terms survives with probability exactly delta^(r+1).
        for (u64 x : G.elements()) {
            double coin = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (coin < delta) add(x);
        }
    } else if (strategy == SubsetStrategy::interval) {
        std::vector<u64> sorted = G.elements();
        std::sort(sorted.begin(), sorted.end());
        for (u64 i = 0; i < target; ++i) add(sorted[i]);
    } else {  // greedy_avoid
        std::vector<u64> order = G.elements();
        deterministic_shuffle(order, rng);
        std::vector<u64> diff_inv(2 * static_cast<size_t>(r) + 1, 0);
        const FieldContext& ctx = G.ctx();
        for (int dlt = -r; dlt <= r; ++dlt) {
            if (dlt == 0) continue;
            u64 v = dlt > 0 ? static_cast<u64>(dlt) % p : p - static_cast<u64>(-dlt) % p;
            diff_inv[static_cast<size_t>(dlt + r)] = ctx.inv(v);
        }
        for (u64 c : order) {
            if (subset.size() >= target) break;
            if (!completes_progression(p, bits, subset, c, r, diff_inv)) add(c);
        }
    }

    TrialOutcome out;
    out.size = subset.size();
    out.raw = count_subset_aps(p, bits, subset, r);
    const double scale = static_cast<double>(G.index());
    out.norm = std::pow(scale, r + 1) *
               static_cast<double>(out.raw + out.size) /  // t = 0 contributes |A|
               (static_cast<double>(p) * static_cast<double>(p));
    return out;
}

}  // namespace

ExperimentStats subset_ap_experiment(const Subgroup& G, double delta, int r,
                                     SubsetStrategy strategy, u64 trials, u64 seed,
                                     unsigned threads) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw domain_error("subset_ap_experiment: delta must be in (0, 1]");
    if (trials < 1) throw domain_error("subset_ap_experiment: need trials >= 1");
    const u64 p = G.p();
    if (r < 1 || static_cast<u64>(r) >= p) throw domain_error("subset_ap_experiment: need 1 <= r < p");
    u64 target = static_cast<u64>(std::ceil(delta * static_cast<double>(G.order()) - 1e-9));
    target = std::min(std::max<u64>(target, 1), G.order());

    std::vector<TrialOutcome> outcomes(trials);
    parallel_for(trials, threads, [&](u64 i) {
        outcomes[i] = run_trial(G, delta, target, r, strategy, derive_seed(seed, i));
    });

    ExperimentStats st;
    st.p = p;
    st.d = G.order();
    st.r = r;
    st.delta = delta;
    st.strategy = strategy_name(strategy);
    st.trials = trials;
    st.seed = seed;
    st.min_raw = outcomes[0].raw;
    double sum_raw = 0.0, sum_norm = 0.0;
    for (const TrialOutcome& o : outcomes) {
        st.min_raw = std::min(st.min_raw, o.raw);
        st.max_raw = std::max(st.max_raw, o.raw);
        sum_raw += static_cast<double>(o.raw);
        sum_norm += o.norm;
        if (o.raw == 0) {
            double density = static_cast<double>(o.size) / static_cast<double>(G.order());
            st.best_apfree_density = std::max(st.best_apfree_density, density);
        }
    }
    st.mean_raw = sum_raw / static_cast<double>(trials);
    st.mean_norm_expectation = sum_norm / static_cast<double>(trials);
    if (trials > 1) {
        double ss = 0.0;
        for (const TrialOutcome& o : outcomes) {
            double dev = static_cast<double>(o.raw) - st.mean_raw;
            ss += dev * dev;
        }
        st.std_raw = std::sqrt(ss / static_cast<double>(trials - 1));
    }
    return st;
}

}  // namespace apg

#pragma once

#include <random>
#include <span>
#include <string>
#include <vector>

#include "apg/field.hpp"
#include "apg/json.hpp"
#include "apg/rational.hpp"

namespace apg {

/// Transference parameters for progression length parameter r:
/// kappa = 1/(r*2^(r+1)), m0 = r*2^(r-1), and the subgroup-size exponent
/// 1 - 1/(4*m0). Exact rationals; kappa * 4 * m0 = 1 identically.
struct GtParameters {
    int r = 0;
    Rational kappa;
    i64 m0 = 0;
    Rational subgroup_exponent;

    ojson to_json() const;
};

GtParameters gt_parameters(int r);

/// m affine forms psi_i(x) = b_i + sum_j L[i][j] x_j in t variables with
/// bounded coefficients; rows must be nonzero and pairwise non-collinear
/// over Q (the linear-forms condition is empty without that).
struct LinearFormSystem {
    int t = 0;
    int m = 0;
    std::vector<i64> constants;
    std::vector<std::vector<i64>> coeffs;
    i64 coeff_bound = 3;

    void validate() const;

    /// Rejection-sampled valid system with entries uniform in [-bound, bound].
    static LinearFormSystem random_valid(std::mt19937_64& rng, int t, int m, i64 bound);

    ojson to_json() const;
};

/// nu = ((p-1)/|G|) * indicator of G; sums to p-1 over F_p.
struct NuWeight {
    const Subgroup* G;
    double scale;

    explicit NuWeight(const Subgroup& g)
        : G(&g), scale(static_cast<double>(g.index())) {}
    double operator()(u64 x) const { return G->contains(x % G->p()) ? scale : 0.0; }
};

enum class ExpectationMode { exhaustive, montecarlo };

struct ExpectationResult {
    double value = 0.0;
    double std_error = 0.0;  // zero in exhaustive mode
    double deviation = 0.0;  // |value - 1|
    u64 hits = 0;
    u64 points = 0;
};

/// E(nu(psi_1(x)) ... nu(psi_m(x)) | x in F_p^t), exactly over the full grid
/// or seeded Monte Carlo. The linear-forms condition says this is 1 + o(1).
ExpectationResult linear_forms_expectation(const Subgroup& G, const LinearFormSystem& sys,
                                           ExpectationMode mode, u64 samples = 0, u64 seed = 1,
                                           u64 point_budget = 100000000);

/// Computable form of the linear-forms deviation bound for this library's
/// verification grids: 4 * ((p-1)/d)^m * (m*sqrt(p) + m^2) / p.
double linear_forms_deviation_bound(const Subgroup& G, int m);

struct CorrelationResult {
    double value = 0.0;
    u64 hits = 0;
    std::vector<std::pair<u64, u64>> coincidence_profile;  // (shift, multiplicity)
};

/// E(nu(x+h_1) ... nu(x+h_q) | x in F_p) with the shift-coincidence profile.
/// Repeated shifts blow the expectation up by index factors; the profile
/// names the multiplicities driving that.
CorrelationResult correlation_expectation(const Subgroup& G, std::span<const u64> shifts,
                                          int q0 = 8);

enum class SubsetStrategy { uniform, greedy_avoid, interval };

SubsetStrategy parse_strategy(const std::string& name);
std::string strategy_name(SubsetStrategy s);

struct ExperimentStats {
    u64 p = 0;
    u64 d = 0;
    int r = 0;
    double delta = 0.0;
    std::string strategy;
    u64 trials = 0;
    u64 seed = 0;
    double mean_norm_expectation = 0.0;
    u64 min_raw = 0;
    double mean_raw = 0.0;
    u64 max_raw = 0;
    double best_apfree_density = 0.0;
    double std_raw = 0.0;  // sample standard deviation of the raw counts

    ojson to_json() const;
};

/// Ordered nontrivial (r+1)-term progressions lying inside the subset
/// (membership bitset over residues plus the element list).
u64 count_subset_aps(u64 p, const std::vector<u64>& member_bits,
                     const std::vector<u64>& subset, int r);

/// Per trial: builds A subset of G by the chosen strategy and counts
/// progressions in A, raw and as the normalized two-variable expectation
/// (which includes the t = 0 diagonal).
///
/// uniform includes each element independently with probability delta, so an
/// ordered progression survives with probability exactly delta^(r+1) and the
/// mean raw count is an unbiased delta^(r+1)-fraction of the census total.
/// interval takes the ceil(delta*|G|) smallest elements. greedy_avoid aims
/// for that size but adds an element only when it completes no progression,
/// so it may stop short; its subsets are AP-free by construction and the
/// best density seen is reported.
ExperimentStats subset_ap_experiment(const Subgroup& G, double delta, int r,
                                     SubsetStrategy strategy, u64 trials, u64 seed,
                                     unsigned threads = 1);

}  // namespace apg

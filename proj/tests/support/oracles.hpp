#pragma once

// Test-only independent oracles. These stay out of the library on purpose:
// the implementations they check must not share code with them.

#include <set>
#include <vector>

#include "apg/common.hpp"

namespace apg::oracle {

inline bool trial_division_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// Multiplicative closure of a generator set mod p, by saturation.
inline std::set<u64> multiplicative_closure(u64 p, const std::vector<u64>& gens) {
    std::set<u64> seen{1};
    std::vector<u64> frontier{1};
    while (!frontier.empty()) {
        u64 x = frontier.back();
        frontier.pop_back();
        for (u64 g : gens) {
            u64 y = mulmod(x, g, p);
            if (seen.insert(y).second) frontier.push_back(y);
        }
    }
    return seen;
}

/// Factor-every-p route: count primes p <= T whose p-1 has a prime divisor
/// in [qlo, qhi]. Trial division only.
inline u64 prime_density_brute(const std::vector<u64>& primes_to_T, u64 qlo, u64 qhi) {
    if (qlo > qhi) return 0;
    u64 count = 0;
    for (u64 p : primes_to_T) {
        u64 n = p - 1;
        bool hit = false;
        for (u64 d = 2; d * d <= n && !hit; ++d) {
            if (n % d != 0) continue;
            while (n % d == 0) n /= d;
            hit = d >= qlo && d <= qhi;
        }
        if (!hit && n > 1) hit = n >= qlo && n <= qhi;
        count += hit;
    }
    return count;
}

}  // namespace apg::oracle

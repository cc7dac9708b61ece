#pragma once

#include <utility>
#include <vector>

#include "apg/common.hpp"

namespace apg {

/// Deterministic primality for the full 64-bit range (Miller-Rabin with a
/// fixed witness set that is known exhaustive below 3.3e24).
bool is_prime(u64 n);

/// Prime factorization of n >= 2 as a sorted multiset.
/// Small-prime trial division plus Brent's rho with a fixed seed sequence,
/// so the output (and its internal work) is deterministic.
std::vector<u64> factorize(u64 n);

/// Factorization grouped as (prime, exponent), primes ascending.
std::vector<std::pair<u64, int>> factor_powers(u64 n);

/// All divisors of n, sorted ascending.
std::vector<u64> divisors(u64 n);

/// Primes <= n via Eratosthenes.
std::vector<u64> primes_upto(u64 n);

/// Smallest prime >= n (n <= 2^62).
u64 next_prime(u64 n);

}  // namespace apg

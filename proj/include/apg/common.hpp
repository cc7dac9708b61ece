#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace apg {

using u8 = std::uint8_t;
using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Precondition violations on mathematical inputs (d does not divide p-1, ...).
struct domain_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A requested computation exceeds a configured memory/time budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An internal mathematical cross-check failed (numeric drift, broken certificate).
/// These indicate a bug in the implementation, never a usage error.
struct verification_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// a * b, clamped to 2^63 on overflow. Used for budget checks on tuple counts.
inline u64 saturating_mul(u64 a, u64 b) {
    constexpr u64 kCap = u64(1) << 63;
    if (a == 0 || b == 0) return 0;
    if (a > kCap / b) return kCap;
    u64 r = a * b;
    return r > kCap ? kCap : r;
}

inline u64 saturating_pow(u64 base, int exp) {
    u64 r = 1;
    for (int i = 0; i < exp; ++i) r = saturating_mul(r, base);
    return r;
}

inline u64 splitmix64(u64& state) {
    u64 z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stream seed for worker `index` under a master seed. Stable across platforms.
inline u64 derive_seed(u64 master, u64 index) {
    u64 s = master ^ (0x517cc1b727220a95ULL * (index + 1));
    return splitmix64(s);
}

/// Unbiased draw from [0, n) by masked rejection. Avoids std::uniform_int_distribution,
/// whose output is implementation-defined; this one is stable everywhere.
inline u64 uniform_below(std::mt19937_64& rng, u64 n) {
    if (n <= 1) return 0;
    int bw = std::bit_width(n - 1);
    u64 mask = (bw >= 64) ? ~u64(0) : ((u64(1) << bw) - 1);
    for (;;) {
        u64 v = rng() & mask;
        if (v < n) return v;
    }
}

/// In-place Fisher-Yates with the portable draw above.
template <typename T>
void deterministic_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
    for (u64 i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

/// FNV-1a over bytes; used for stable parameter digests.
inline u64 fnv1a64(std::string_view bytes) {
    u64 h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace apg

#pragma once

#include <complex>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "apg/common.hpp"

namespace apg {

class Subgroup;

/// Prime-field substrate: a prime p, the factored group order p-1, the
/// smallest primitive root g, and a full discrete-log table base g.
///
/// The table makes every later census/character pass O(1) per residue, at
/// O(p) memory. Construction refuses primes beyond `table_budget` instead of
/// silently degrading. Immutable after construction and safe to share
/// read-only across threads.
class FieldContext {
  public:
    static constexpr u64 kDefaultTableBudget = u64(1) << 27;

    explicit FieldContext(u64 p, u64 table_budget = kDefaultTableBudget);

    FieldContext(const FieldContext&) = delete;
    FieldContext& operator=(const FieldContext&) = delete;

    u64 p() const { return p_; }
    u64 generator() const { return g_; }
    const std::vector<std::pair<u64, int>>& factors_p_minus_1() const { return factors_; }

    /// Discrete log of x in [1, p-1]; dlog(g^k) = k, dlog(1) = 0.
    u64 dlog(u64 x) const { return dlog_[x]; }

    u64 mul(u64 a, u64 b) const { return mulmod(a, b, p_); }
    u64 pow(u64 b, u64 e) const { return powmod(b, e, p_); }
    u64 inv(u64 x) const;

    /// Least k >= 1 with x^k = 1, via the factored group order.
    u64 element_order(u64 x) const;

    /// The unique subgroup of order d, for d | p-1.
    Subgroup subgroup(u64 d) const;

    /// Roots of unity e^(2*pi*i*t/(p-1)) for t in [0, p-1). Built lazily on
    /// first use (census scans never need it); thread-safe.
    const std::vector<std::complex<double>>& unit_roots() const;

  private:
    u64 p_;
    u64 g_;
    std::vector<std::pair<u64, int>> factors_;
    std::vector<u32> dlog_;
    mutable std::mutex roots_mutex_;
    mutable std::unique_ptr<std::vector<std::complex<double>>> roots_;
};

/// Multiplicative subgroup of order d | p-1: bit-packed membership over
/// [0, p-1] plus the element list in generation order (powers of g^((p-1)/d)).
class Subgroup {
  public:
    Subgroup(const FieldContext& ctx, u64 d);

    const FieldContext& ctx() const { return *ctx_; }
    u64 p() const { return ctx_->p(); }
    u64 order() const { return d_; }

    /// (p-1)/d, the index in F_p^*; also the nu-weight scale.
    u64 index() const { return (ctx_->p() - 1) / d_; }

    bool contains(u64 x) const { return (bits_[x >> 6] >> (x & 63)) & 1; }

    const std::vector<u64>& elements() const { return elements_; }

  private:
    const FieldContext* ctx_;
    u64 d_;
    std::vector<u64> bits_;
    std::vector<u64> elements_;
};

}  // namespace apg

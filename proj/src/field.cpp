#include "apg/field.hpp"

#include <cmath>
#include <numbers>

#include "apg/factor.hpp"

namespace apg {

FieldContext::FieldContext(u64 p, u64 table_budget) : p_(p) {
    if (p < 3 || !is_prime(p)) throw domain_error("FieldContext: p must be an odd prime >= 3");
    if (table_budget > (u64(1) << 32)) table_budget = u64(1) << 32;
    if (p > table_budget)
        throw resource_error("FieldContext: p exceeds the discrete-log table budget");

    factors_ = factor_powers(p - 1);

    // Smallest primitive root; reproducible across runs.
    for (u64 g = 2;; ++g) {
        bool ok = true;
        for (auto [q, e] : factors_) {
            if (powmod(g, (p - 1) / q, p) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            g_ = g;
            break;
        }
    }

    dlog_.assign(p, 0xffffffffu);  // slot 0 stays unset
    u64 acc = 1;
    for (u64 k = 0; k < p - 1; ++k) {
        dlog_[acc] = static_cast<u32>(k);
        acc = mulmod(acc, g_, p);
    }
}

u64 FieldContext::inv(u64 x) const {
    if (x == 0) throw domain_error("inv: zero has no inverse");
    return powmod(x % p_, p_ - 2, p_);
}

u64 FieldContext::element_order(u64 x) const {
    if (x == 0 || x >= p_) throw domain_error("element_order: x must be in [1, p-1]");
    u64 k = p_ - 1;
    for (auto [q, e] : factors_) {
        for (int i = 0; i < e; ++i) {
            if (powmod(x, k / q, p_) == 1)
                k /= q;
            else
                break;
        }
    }
    return k;
}

Subgroup FieldContext::subgroup(u64 d) const { return Subgroup(*this, d); }

const std::vector<std::complex<double>>& FieldContext::unit_roots() const {
    std::lock_guard<std::mutex> lock(roots_mutex_);
    if (!roots_) {
        auto table = std::make_unique<std::vector<std::complex<double>>>();
        table->resize(p_ - 1);
        const double step = 2.0 * std::numbers::pi / static_cast<double>(p_ - 1);
        for (u64 t = 0; t < p_ - 1; ++t) {
            double a = step * static_cast<double>(t);
            (*table)[t] = {std::cos(a), std::sin(a)};
        }
        roots_ = std::move(table);
    }
    return *roots_;
}

Subgroup::Subgroup(const FieldContext& ctx, u64 d) : ctx_(&ctx), d_(d) {
    u64 p = ctx.p();
    if (d == 0 || (p - 1) % d != 0) throw domain_error("Subgroup: d must divide p-1");
    bits_.assign((p + 63) / 64, 0);
    elements_.reserve(d);
    u64 h = ctx.pow(ctx.generator(), (p - 1) / d);
    u64 e = 1;
    for (u64 i = 0; i < d; ++i) {
        elements_.push_back(e);
        bits_[e >> 6] |= u64(1) << (e & 63);
        e = ctx.mul(e, h);
    }
}

}  // namespace apg

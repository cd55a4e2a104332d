#pragma once

#include <cstdint>
#include <limits>

namespace smalldiv {

/// base^exp, saturating at UINT64_MAX on overflow.
constexpr std::uint64_t saturating_pow(std::uint64_t base, unsigned exp) noexcept {
    std::uint64_t result = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && result > std::numeric_limits<std::uint64_t>::max() / base) {
            return std::numeric_limits<std::uint64_t>::max();
        }
        result *= base;
    }
    return result;
}

/// True iff base^exp <= bound, without overflow.
constexpr bool pow_at_most(std::uint64_t base, unsigned exp, std::uint64_t bound) noexcept {
    std::uint64_t result = 1;
    for (unsigned i = 0; i < exp; ++i) {
        if (base != 0 && result > bound / base) {
            return false;
        }
        result *= base;
    }
    return result <= bound;
}

/// The unique r with r^k <= n < (r+1)^k. Requires k >= 1.
constexpr std::uint64_t integer_kth_root(std::uint64_t n, unsigned k) noexcept {
    if (k <= 1 || n <= 1) {
        return n;
    }
    // Binary search on [0, hi]; 2^(64/k + 1) bounds the root.
    std::uint64_t lo = 1;
    std::uint64_t hi = std::uint64_t{1} << (64 / k + 1);
    if (hi > n) {
        hi = n;
    }
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (pow_at_most(mid, k, n)) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return lo;
}

}  // namespace smalldiv

#pragma once

#include <cstdint>
#include <vector>

#include "smalldiv/weights.hpp"

namespace smalldiv {

/// Exact integer counts of (d, n) pairs keyed by (omega(d), flags), where
/// bit i of flags records whether the i-th tracked ("flag") prime divides d.
///
/// Every weighted aggregate in this library is first accumulated here and
/// converted to a real only once, in evaluate(). Two computations agree
/// exactly iff their ClassCounts compare equal.
class ClassCounts {
public:
    static constexpr int omega_slots = 32;
    static constexpr std::size_t max_flag_primes = 10;

    /// `flag_primes` must be ascending primes; at most max_flag_primes.
    explicit ClassCounts(std::vector<std::uint32_t> flag_primes = {});

    const std::vector<std::uint32_t>& flag_primes() const noexcept { return flag_primes_; }

    /// Bit for prime p, or 0 when p is not tracked.
    unsigned flag_bit(std::uint32_t p) const noexcept {
        for (std::size_t i = 0; i < flag_primes_.size(); ++i) {
            if (flag_primes_[i] == p) {
                return 1u << i;
            }
        }
        return 0;
    }

    void add(int omega, unsigned flags, std::uint64_t count) {
        counts_[index(omega, flags)] += count;
    }
    std::uint64_t count(int omega, unsigned flags) const { return counts_[index(omega, flags)]; }

    /// Adds another table over the same flag primes.
    void merge(const ClassCounts& other);

    /// Sum of all counts (the pair count at h == 1).
    std::uint64_t total() const noexcept;

    /// Sum over classes of count * c^(omega - |flags|) * prod of flagged h(p),
    /// in ascending class order with compensated summation.
    double evaluate(const PrimeWeight& w) const;

    /// Calls f(omega, flags, count) for each non-zero class in ascending order.
    template <typename F>
    void for_each(F&& f) const {
        for (unsigned flags = 0; flags < num_masks(); ++flags) {
            for (int omega = 0; omega < omega_slots; ++omega) {
                const std::uint64_t c = counts_[flags * omega_slots + omega];
                if (c != 0) {
                    f(omega, flags, c);
                }
            }
        }
    }

    /// Same counts re-keyed over a superset of flag primes.
    ClassCounts widen(const std::vector<std::uint32_t>& superset) const;

    /// Counts for d = m * p from counts over m (p must not divide any m):
    /// omega grows by one and p's flag is set. Result is keyed over
    /// flag_primes() plus p.
    ClassCounts lift_by_prime(std::uint32_t p) const;

    bool operator==(const ClassCounts& other) const = default;

private:
    unsigned num_masks() const noexcept { return 1u << flag_primes_.size(); }
    std::size_t index(int omega, unsigned flags) const;

    std::vector<std::uint32_t> flag_primes_;
    std::vector<std::uint64_t> counts_;
};

}  // namespace smalldiv

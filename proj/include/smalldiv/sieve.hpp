#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "smalldiv/parallel.hpp"

namespace smalldiv {

/// Distinct primes of one integer, ascending. Integers up to 2^31 have at
/// most 10 distinct primes; the capacity leaves room for that.
class PrimeFactors {
public:
    static constexpr std::size_t capacity = 15;

    void push_back(std::uint32_t p) noexcept { primes_[size_++] = p; }

    std::size_t size() const noexcept { return size_; }
    bool empty() const noexcept { return size_ == 0; }
    std::uint32_t operator[](std::size_t i) const noexcept { return primes_[i]; }
    const std::uint32_t* begin() const noexcept { return primes_.data(); }
    const std::uint32_t* end() const noexcept { return primes_.data() + size_; }
    std::span<const std::uint32_t> view() const noexcept { return {primes_.data(), size_}; }

    /// True iff some listed prime divides `n`.
    bool divides_any(std::uint64_t n) const noexcept {
        for (std::size_t i = 0; i < size_; ++i) {
            if (n % primes_[i] == 0) {
                return true;
            }
        }
        return false;
    }

private:
    std::array<std::uint32_t, capacity> primes_{};
    std::size_t size_ = 0;
};

/// Squarefree-count histogram: entry j is the number of squarefree n <= x
/// with omega(n) = j. Trailing zero classes are trimmed.
using OmegaCounts = std::vector<std::uint64_t>;

/// Smallest-prime-factor, Moebius and omega tables for 1..limit.
///
/// Memory is 6 bytes per integer (uint32 spf, int8 mu, uint8 omega) plus
/// the prime list: about 60 MB at limit 10^7 and 600 MB at 10^8.
/// Immutable after construction and safe to share between threads.
class SieveTables {
public:
    static constexpr std::uint64_t max_limit = std::uint64_t{1} << 31;

    explicit SieveTables(std::uint64_t limit);

    std::uint64_t limit() const noexcept { return limit_; }

    std::uint32_t spf(std::uint64_t n) const { return spf_[checked(n)]; }
    int mu(std::uint64_t n) const { return mu_[checked(n)]; }
    int omega(std::uint64_t n) const { return omega_[checked(n)]; }

    bool is_squarefree(std::uint64_t n) const { return mu_[checked(n)] != 0; }
    bool is_prime(std::uint64_t n) const { return n >= 2 && spf_[checked(n)] == n; }

    /// All primes <= limit, ascending.
    const std::vector<std::uint32_t>& primes() const noexcept { return primes_; }

    /// Distinct primes of n by repeated division by spf.
    PrimeFactors factor(std::uint64_t n) const;

    /// Squarefree n <= x, ascending.
    std::vector<std::uint32_t> squarefree_up_to(std::uint64_t x) const;

    /// Squarefree n <= x with omega(n) == w, ascending.
    std::vector<std::uint32_t> squarefree_with_omega(int w, std::uint64_t x) const;

    // Raw table access for hot loops; index 0 is unused.
    std::span<const std::uint32_t> spf_table() const noexcept { return spf_; }
    std::span<const std::int8_t> mu_table() const noexcept { return mu_; }
    std::span<const std::uint8_t> omega_table() const noexcept { return omega_; }

private:
    std::uint64_t checked(std::uint64_t n) const;

    std::uint64_t limit_;
    std::vector<std::uint32_t> spf_;
    std::vector<std::int8_t> mu_;
    std::vector<std::uint8_t> omega_;
    std::vector<std::uint32_t> primes_;
};

/// Linear (Euler) sieve up to `limit`; 2 <= limit <= 2^31.
SieveTables build_sieve(std::uint64_t limit);

/// Distinct primes of n, ascending; n in [1, limit].
std::vector<std::uint32_t> distinct_primes(std::uint64_t n, const SieveTables& tables);

/// Exact count of squarefree n <= x with gcd(n, m) = 1. m must be squarefree.
std::uint64_t squarefree_coprime_count(std::uint64_t x, std::uint64_t m,
                                       const SieveTables& tables);

/// Squarefree n <= x grouped by omega(n).
OmegaCounts omega_class_counts(std::uint64_t x, const SieveTables& tables,
                               Threads threads = {});

/// Primes <= bound by an odd-only Eratosthenes sieve; lighter than full
/// tables when only the prime list is needed.
std::vector<std::uint32_t> primes_up_to(std::uint64_t bound);

}  // namespace smalldiv

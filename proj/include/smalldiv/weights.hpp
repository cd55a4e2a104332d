#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "smalldiv/sieve.hpp"

namespace smalldiv {

/// Multiplicative weight h on squarefree integers: h(p) = base_c except at
/// finitely many overridden primes. h(1) = 1.
///
/// In strict mode every prime value must satisfy h(p) < 1/(k_context - 1);
/// non-strict mode admits larger values for exploring where the small-divisor
/// inequality breaks down.
class PrimeWeight {
public:
    explicit PrimeWeight(double base_c, std::map<std::uint32_t, double> overrides = {},
                         int k_context = 2, bool strict = true);

    double base_c() const noexcept { return base_c_; }
    const std::map<std::uint32_t, double>& overrides() const noexcept { return overrides_; }
    int k_context() const noexcept { return k_context_; }
    bool strict() const noexcept { return strict_; }

    /// h(p) for a prime p.
    double at_prime(std::uint32_t p) const noexcept {
        const auto it = overrides_.find(p);
        return it == overrides_.end() ? base_c_ : it->second;
    }

    /// Overridden primes, ascending.
    std::vector<std::uint32_t> override_primes() const;

    /// Throws range_error when an override prime lies beyond the table.
    void check_against(const SieveTables& tables) const;

private:
    double base_c_;
    std::map<std::uint32_t, double> overrides_;
    int k_context_;
    bool strict_;
};

/// h(n) for squarefree n: product of h(p) over p | n.
double h_eval(std::uint64_t n, const PrimeWeight& w, const SieveTables& tables);

/// g(m) = prod_{p | m} p / (p + 1) for squarefree m.
double g_eval(std::uint64_t m, const SieveTables& tables);

/// tau_k(n) = k^omega(n) for squarefree n; range_error if it overflows 64 bits.
std::uint64_t tau_k_squarefree(std::uint64_t n, int k, const SieveTables& tables);

/// E(m) = sum_{d | m} mu^2(d) / sqrt(d) for squarefree m.
double e_of_m(std::uint64_t m, const SieveTables& tables);

/// Same divisor sum from an explicit list of distinct primes (at most 25).
double e_of_primes(std::span<const std::uint32_t> primes);

/// tau(p)^{2/3} g(p) h(p) at a prime p.
double pointwise_product(std::uint32_t p, const PrimeWeight& w);

/// 2^{2/3} * (3/2) / (k - 1): the ceiling for pointwise_product in strict mode.
double pointwise_ceiling(int k);

}  // namespace smalldiv

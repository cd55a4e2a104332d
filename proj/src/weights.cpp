#include "smalldiv/weights.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "smalldiv/error.hpp"

namespace smalldiv {

namespace {

bool is_prime_by_trial(std::uint64_t n) {
    if (n < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

void require_value(double v, const std::string& what) {
    if (!std::isfinite(v) || v < 0.0) {
        throw config_error(what + " must be a finite non-negative real");
    }
}

PrimeFactors squarefree_factors(std::uint64_t n, const SieveTables& tables) {
    if (!tables.is_squarefree(n)) {
        throw domain_error(std::to_string(n) + " is not squarefree");
    }
    return tables.factor(n);
}

}  // namespace

PrimeWeight::PrimeWeight(double base_c, std::map<std::uint32_t, double> overrides, int k_context,
                         bool strict)
    : base_c_(base_c), overrides_(std::move(overrides)), k_context_(k_context), strict_(strict) {
    if (k_context < 2) {
        throw config_error("k must be at least 2");
    }
    require_value(base_c, "c");
    const double ceiling = 1.0 / (k_context - 1);
    if (strict && !(base_c < ceiling)) {
        throw config_error("strict mode requires c < 1/(k-1) = " + std::to_string(ceiling));
    }
    for (const auto& [p, v] : overrides_) {
        if (!is_prime_by_trial(p)) {
            throw domain_error("override key " + std::to_string(p) + " is not prime");
        }
        require_value(v, "override value at " + std::to_string(p));
        if (strict && !(v < ceiling)) {
            throw config_error("strict mode requires h(" + std::to_string(p) +
                               ") < 1/(k-1) = " + std::to_string(ceiling));
        }
    }
}

std::vector<std::uint32_t> PrimeWeight::override_primes() const {
    std::vector<std::uint32_t> out;
    out.reserve(overrides_.size());
    for (const auto& entry : overrides_) {
        out.push_back(entry.first);
    }
    return out;
}

void PrimeWeight::check_against(const SieveTables& tables) const {
    for (const auto& entry : overrides_) {
        if (entry.first > tables.limit()) {
            throw range_error("override prime " + std::to_string(entry.first) +
                              " exceeds the sieve limit");
        }
    }
}

double h_eval(std::uint64_t n, const PrimeWeight& w, const SieveTables& tables) {
    double value = 1.0;
    for (const std::uint32_t p : squarefree_factors(n, tables)) {
        value *= w.at_prime(p);
    }
    return value;
}

double g_eval(std::uint64_t m, const SieveTables& tables) {
    double value = 1.0;
    for (const std::uint32_t p : squarefree_factors(m, tables)) {
        value *= static_cast<double>(p) / (static_cast<double>(p) + 1.0);
    }
    return value;
}

std::uint64_t tau_k_squarefree(std::uint64_t n, int k, const SieveTables& tables) {
    if (k < 2) {
        throw config_error("k must be at least 2");
    }
    const auto primes = squarefree_factors(n, tables);
    std::uint64_t value = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) {
        if (value > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(k)) {
            throw range_error("tau_k overflows 64 bits");
        }
        value *= static_cast<std::uint64_t>(k);
    }
    return value;
}

double e_of_primes(std::span<const std::uint32_t> primes) {
    if (primes.size() > 25) {
        throw range_error("E(m) divisor enumeration limited to omega <= 25");
    }
    // Expand prod (1 + 1/sqrt p) term by term so every divisor appears once.
    std::vector<double> terms{1.0};
    terms.reserve(std::size_t{1} << primes.size());
    for (const std::uint32_t p : primes) {
        const double s = 1.0 / std::sqrt(static_cast<double>(p));
        const std::size_t half = terms.size();
        for (std::size_t i = 0; i < half; ++i) {
            terms.push_back(terms[i] * s);
        }
    }
    double sum = 0.0;
    for (const double t : terms) {
        sum += t;
    }
    return sum;
}

double e_of_m(std::uint64_t m, const SieveTables& tables) {
    const auto primes = squarefree_factors(m, tables);
    return e_of_primes(primes.view());
}

double pointwise_product(std::uint32_t p, const PrimeWeight& w) {
    const double g = static_cast<double>(p) / (static_cast<double>(p) + 1.0);
    return std::cbrt(4.0) * g * w.at_prime(p);
}

double pointwise_ceiling(int k) { return std::cbrt(4.0) * 1.5 / (k - 1); }

}  // namespace smalldiv

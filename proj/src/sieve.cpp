#include "smalldiv/sieve.hpp"

#include <string>

#include "smalldiv/error.hpp"

namespace smalldiv {

namespace {

constexpr std::uint64_t kCountChunk = 1 << 20;

}  // namespace

SieveTables::SieveTables(std::uint64_t limit) : limit_(limit) {
    if (limit < 2 || limit > max_limit) {
        throw config_error("sieve limit must lie in [2, 2^31], got " + std::to_string(limit));
    }
    spf_.assign(limit + 1, 0);
    mu_.assign(limit + 1, 0);
    omega_.assign(limit + 1, 0);
    spf_[1] = 1;
    mu_[1] = 1;
    omega_[1] = 0;

    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            mu_[i] = -1;
            omega_[i] = 1;
            primes_.push_back(static_cast<std::uint32_t>(i));
        }
        const std::uint32_t si = spf_[i];
        for (const std::uint32_t p : primes_) {
            const std::uint64_t ip = i * p;
            if (p > si || ip > limit) {
                break;
            }
            spf_[ip] = p;
            if (p == si) {
                mu_[ip] = 0;
                omega_[ip] = omega_[i];
            } else {
                mu_[ip] = static_cast<std::int8_t>(-mu_[i]);
                omega_[ip] = static_cast<std::uint8_t>(omega_[i] + 1);
            }
        }
    }
}

std::uint64_t SieveTables::checked(std::uint64_t n) const {
    if (n < 1 || n > limit_) {
        throw range_error(std::to_string(n) + " is outside the sieve range [1, " +
                          std::to_string(limit_) + "]");
    }
    return n;
}

PrimeFactors SieveTables::factor(std::uint64_t n) const {
    checked(n);
    PrimeFactors out;
    while (n > 1) {
        const std::uint32_t p = spf_[n];
        out.push_back(p);
        do {
            n /= p;
        } while (n % p == 0);
    }
    return out;
}

std::vector<std::uint32_t> SieveTables::squarefree_up_to(std::uint64_t x) const {
    if (x > limit_) {
        checked(x);
    }
    std::vector<std::uint32_t> out;
    out.reserve(static_cast<std::size_t>(0.61 * static_cast<double>(x)) + 16);
    for (std::uint64_t n = 1; n <= x; ++n) {
        if (mu_[n] != 0) {
            out.push_back(static_cast<std::uint32_t>(n));
        }
    }
    return out;
}

std::vector<std::uint32_t> SieveTables::squarefree_with_omega(int w, std::uint64_t x) const {
    if (x > limit_) {
        checked(x);
    }
    std::vector<std::uint32_t> out;
    for (std::uint64_t n = 1; n <= x; ++n) {
        if (mu_[n] != 0 && omega_[n] == w) {
            out.push_back(static_cast<std::uint32_t>(n));
        }
    }
    return out;
}

SieveTables build_sieve(std::uint64_t limit) { return SieveTables(limit); }

std::vector<std::uint32_t> distinct_primes(std::uint64_t n, const SieveTables& tables) {
    const auto f = tables.factor(n);
    return {f.begin(), f.end()};
}

std::uint64_t squarefree_coprime_count(std::uint64_t x, std::uint64_t m,
                                       const SieveTables& tables) {
    if (x == 0) {
        return 0;
    }
    if (x > tables.limit()) {
        throw range_error("x = " + std::to_string(x) + " exceeds the sieve limit");
    }
    if (!tables.is_squarefree(m)) {
        throw domain_error("m = " + std::to_string(m) + " is not squarefree");
    }
    const PrimeFactors primes = tables.factor(m);
    const auto mu = tables.mu_table();
    std::uint64_t count = 0;
    for (std::uint64_t n = 1; n <= x; ++n) {
        if (mu[n] != 0 && !primes.divides_any(n)) {
            ++count;
        }
    }
    return count;
}

OmegaCounts omega_class_counts(std::uint64_t x, const SieveTables& tables, Threads threads) {
    if (x > tables.limit()) {
        throw range_error("x = " + std::to_string(x) + " exceeds the sieve limit");
    }
    using Histogram = std::array<std::uint64_t, 32>;
    const auto mu = tables.mu_table();
    const auto omega = tables.omega_table();
    const Histogram total = reduce_chunks<Histogram>(
        make_chunks(1, x + 1, kCountChunk), threads, Histogram{},
        [&](IndexRange r) {
            Histogram h{};
            for (std::uint64_t n = r.begin; n < r.end; ++n) {
                if (mu[n] != 0) {
                    ++h[omega[n]];
                }
            }
            return h;
        },
        [](Histogram& acc, const Histogram& part) {
            for (std::size_t j = 0; j < acc.size(); ++j) {
                acc[j] += part[j];
            }
        });
    OmegaCounts out(total.begin(), total.end());
    while (!out.empty() && out.back() == 0) {
        out.pop_back();
    }
    return out;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t bound) {
    std::vector<std::uint32_t> out;
    if (bound < 2) {
        return out;
    }
    if (bound > SieveTables::max_limit) {
        throw config_error("prime bound exceeds 2^31");
    }
    out.push_back(2);
    // composite[i] describes the odd number 2i + 1.
    const std::uint64_t half = (bound - 1) / 2;
    std::vector<bool> composite(half + 1, false);
    for (std::uint64_t i = 1; i <= half; ++i) {
        if (composite[i]) {
            continue;
        }
        const std::uint64_t p = 2 * i + 1;
        out.push_back(static_cast<std::uint32_t>(p));
        for (std::uint64_t j = (p * p - 1) / 2; j <= half; j += p) {
            composite[j] = true;
        }
    }
    return out;
}

}  // namespace smalldiv

#include "smalldiv/census.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <set>
#include <string>

#include "smalldiv/error.hpp"
#include "smalldiv/int_math.hpp"

namespace smalldiv {

namespace {

void check_census(int omega, int k) {
    if (k < 2 || k > census_max_k) {
        throw config_error("census needs 2 <= k <= " + std::to_string(census_max_k));
    }
    if (omega > census_max_omega) {
        throw range_error("census needs omega(n) <= " + std::to_string(census_max_omega));
    }
    if (saturating_pow(static_cast<std::uint64_t>(k), static_cast<unsigned>(omega)) >
        census_budget) {
        throw range_error("k^omega(n) exceeds the enumeration budget of " +
                          std::to_string(census_budget) + " assignments");
    }
}

/// Uniform integer in [0, bound) from a 64-bit engine, by rejection.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
    const std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    for (;;) {
        const std::uint64_t r = rng();
        if (r < limit) {
            return r % bound;
        }
    }
}

/// First `count` entries of a seeded partial Fisher-Yates shuffle.
template <typename T>
void partial_shuffle(std::vector<T>& items, std::size_t count, std::mt19937_64& rng) {
    for (std::size_t i = 0; i < count && i < items.size(); ++i) {
        const std::size_t j = i + static_cast<std::size_t>(uniform_below(rng, items.size() - i));
        std::swap(items[i], items[j]);
    }
}

}  // namespace

std::string_view to_string(SampleSource s) {
    return s == SampleSource::sieve_index ? "sieve_index" : "prime_pool";
}

CensusRecord census_of_primes(std::span<const std::uint64_t> primes, int k) {
    const int w = static_cast<int>(primes.size());
    check_census(w, k);
    std::uint64_t n = 1;
    for (const auto p : primes) {
        if (n > std::numeric_limits<std::uint64_t>::max() / p) {
            throw range_error("census: product of primes overflows 64 bits");
        }
        n *= p;
    }
    const std::uint64_t root = integer_kth_root(n, static_cast<unsigned>(k));

    // Odometer over slot assignments: digit i is the slot holding prime i.
    std::vector<int> slot(primes.size(), 0);
    std::vector<std::uint64_t> part(static_cast<std::size_t>(k), 1);
    part[0] = n;
    std::uint64_t small = 0;
    for (const auto d : part) {
        small += d <= root ? 1 : 0;
    }

    CensusRecord rec;
    rec.n = n;
    rec.k = k;
    rec.omega_n = w;
    for (;;) {
        rec.g_k += small;
        ++rec.enumerated;
        std::size_t i = 0;
        for (; i < slot.size(); ++i) {
            const auto from = static_cast<std::size_t>(slot[i]);
            const auto to = (from + 1) % static_cast<std::size_t>(k);
            small -= (part[from] <= root) + (part[to] <= root);
            part[from] /= primes[i];
            part[to] *= primes[i];
            small += (part[from] <= root) + (part[to] <= root);
            slot[i] = static_cast<int>(to);
            if (to != 0) {
                break;
            }
        }
        if (i == slot.size()) {
            break;
        }
    }
    rec.tau_k = saturating_pow(static_cast<std::uint64_t>(k), static_cast<unsigned>(w));
    rec.ratio = static_cast<double>(rec.g_k) / static_cast<double>(rec.tau_k);
    return rec;
}

CensusRecord census(std::uint64_t n, int k, const SieveTables& tables) {
    if (!tables.is_squarefree(n)) {
        throw domain_error(std::to_string(n) + " is not squarefree");
    }
    const PrimeFactors f = tables.factor(n);
    const std::vector<std::uint64_t> primes(f.begin(), f.end());
    return census_of_primes(primes, k);
}

CensusSample census_sample(int omega_target, int k, std::size_t count, std::uint64_t seed,
                           const SieveTables& tables, SampleSource source, Threads threads) {
    if (omega_target < 1) {
        throw domain_error("census sampling needs omega >= 1 (omega 0 is n = 1 only)");
    }
    if (count == 0) {
        throw config_error("census sampling needs at least one sample");
    }
    check_census(omega_target, k);

    std::mt19937_64 rng(seed);
    std::vector<std::vector<std::uint64_t>> drawn;
    CensusSample out;
    out.omega = omega_target;
    out.k = k;
    out.seed = seed;
    out.source = source;

    if (source == SampleSource::sieve_index) {
        std::vector<std::uint32_t> population =
            tables.squarefree_with_omega(omega_target, tables.limit());
        out.population = population.size();
        if (population.size() < count) {
            throw range_error("only " + std::to_string(population.size()) +
                              " squarefree n <= " + std::to_string(tables.limit()) +
                              " have omega = " + std::to_string(omega_target) + "; " +
                              std::to_string(count) + " requested");
        }
        partial_shuffle(population, count, rng);
        for (std::size_t i = 0; i < count; ++i) {
            const PrimeFactors f = tables.factor(population[i]);
            drawn.emplace_back(f.begin(), f.end());
        }
    } else {
        const auto pool_size = static_cast<std::size_t>(2 * omega_target);
        std::vector<std::uint32_t> small_primes = primes_up_to(1000);
        if (small_primes.size() < pool_size) {
            throw range_error("prime pool too small for omega " + std::to_string(omega_target));
        }
        small_primes.resize(pool_size);
        // Number of omega-subsets of the pool (saturating).
        std::uint64_t subsets = 1;
        for (std::size_t i = 1; i <= static_cast<std::size_t>(omega_target); ++i) {
            subsets = subsets * (pool_size - static_cast<std::size_t>(omega_target) + i) / i;
        }
        out.population = subsets;
        std::set<std::vector<std::uint64_t>> seen;
        const std::size_t max_attempts = 1000 * count + 1000;
        for (std::size_t attempt = 0; drawn.size() < count; ++attempt) {
            if (attempt >= max_attempts) {
                throw range_error("prime pool could not supply " + std::to_string(count) +
                                  " distinct n with omega = " + std::to_string(omega_target));
            }
            std::vector<std::uint32_t> pool = small_primes;
            partial_shuffle(pool, static_cast<std::size_t>(omega_target), rng);
            std::vector<std::uint64_t> chosen(pool.begin(), pool.begin() + omega_target);
            std::sort(chosen.begin(), chosen.end());
            std::uint64_t n = 1;
            bool overflow = false;
            for (const auto p : chosen) {
                if (n > (std::numeric_limits<std::uint64_t>::max() >> 1) / p) {
                    overflow = true;
                    break;
                }
                n *= p;
            }
            if (overflow || !seen.insert(chosen).second) {
                continue;
            }
            drawn.push_back(std::move(chosen));
        }
    }

    out.records = map_chunks<CensusRecord>(
        make_chunks(0, drawn.size(), 1), threads,
        [&](IndexRange r) { return census_of_primes(drawn[r.begin], k); });

    double sum = 0.0;
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = -std::numeric_limits<double>::infinity();
    for (const auto& rec : out.records) {
        sum += rec.ratio;
        out.min_ratio = std::min(out.min_ratio, rec.ratio);
        out.max_ratio = std::max(out.max_ratio, rec.ratio);
    }
    out.mean_ratio = sum / static_cast<double>(out.records.size());
    out.distance_from_half_k = std::abs(out.mean_ratio - k / 2.0);
    return out;
}

}  // namespace smalldiv

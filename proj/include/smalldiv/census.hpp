#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "smalldiv/parallel.hpp"
#include "smalldiv/sieve.hpp"

namespace smalldiv {

inline constexpr std::uint64_t census_budget = 100'000'000;
inline constexpr int census_max_k = 16;
inline constexpr int census_max_omega = 25;

/// tau_k(n) and g_k(n) for one squarefree n, where g_k(n) counts, over all
/// ordered k-tuples (d_1, ..., d_k) with product n, the components with
/// d_i^k <= n.
struct CensusRecord {
    std::uint64_t n = 1;
    int k = 2;
    std::uint64_t tau_k = 1;
    std::uint64_t g_k = 0;
    double ratio = 0.0;  // g_k / tau_k
    int omega_n = 0;
    std::uint64_t enumerated = 0;  // assignments visited; equals tau_k
};

/// Enumerates all k^omega(n) assignments of the primes of n to k slots.
CensusRecord census(std::uint64_t n, int k, const SieveTables& tables);

/// Same, for n given by its distinct primes (ascending, product < 2^64).
/// n may lie beyond any sieve table.
CensusRecord census_of_primes(std::span<const std::uint64_t> primes, int k);

enum class SampleSource {
    sieve_index,  // uniform over squarefree n <= limit with omega(n) = target
    prime_pool,   // uniform over products of `target` distinct primes among the first 2*target
};

std::string_view to_string(SampleSource s);

struct CensusSample {
    int omega = 0;
    int k = 2;
    std::uint64_t seed = 0;
    SampleSource source = SampleSource::sieve_index;
    std::uint64_t population = 0;  // size of the sampled population
    std::vector<CensusRecord> records;
    double mean_ratio = 0.0;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    double distance_from_half_k = 0.0;  // |mean_ratio - k/2|
};

/// Seeded sample of `count` distinct squarefree n with omega(n) = omega_target.
/// Records come back in draw order; evaluation may be spread over threads
/// without changing the result.
CensusSample census_sample(int omega_target, int k, std::size_t count, std::uint64_t seed,
                           const SieveTables& tables,
                           SampleSource source = SampleSource::sieve_index,
                           Threads threads = {});

}  // namespace smalldiv

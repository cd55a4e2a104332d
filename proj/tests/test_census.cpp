#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "smalldiv/census.hpp"
#include "smalldiv/error.hpp"
#include "smalldiv/int_math.hpp"

using namespace smalldiv;

namespace {

// Enumerates assignments with the slots relabelled in reverse, and with the
// primes visited in descending order.
std::uint64_t relabelled_g(const std::vector<std::uint64_t>& primes, int k) {
    std::uint64_t n = 1;
    for (const auto p : primes) {
        n *= p;
    }
    const std::size_t w = primes.size();
    std::vector<int> slot(w, 0);
    std::uint64_t g = 0;
    while (true) {
        std::vector<std::uint64_t> d(k, 1);
        for (std::size_t i = 0; i < w; ++i) {
            d[k - 1 - slot[i]] *= primes[w - 1 - i];
        }
        for (const auto di : d) {
            g += pow_at_most(di, k, n) ? 1 : 0;
        }
        std::size_t i = 0;
        while (i < w && ++slot[i] == k) {
            slot[i++] = 0;
        }
        if (i == w) {
            break;
        }
    }
    return g;
}

}  // namespace

TEST_CASE("hand-checked census values") {
    const auto t = build_sieve(1'000);
    const auto r6 = census(6, 2, t);
    CHECK(r6.tau_k == 4);
    CHECK(r6.g_k == 4);
    CHECK(r6.ratio == 1.0);
    const auto r30 = census(30, 3, t);
    CHECK(r30.tau_k == 27);
    CHECK(r30.g_k == 48);
    CHECK(r30.ratio == doctest::Approx(48.0 / 27.0));
    CHECK(r30.enumerated == 27);
    for (const int k : {2, 3, 7}) {
        const auto r1 = census(1, k, t);
        CHECK(r1.tau_k == 1);
        CHECK(r1.g_k == static_cast<std::uint64_t>(k));
    }
    CHECK_THROWS_AS(census(12, 2, t), domain_error);
    CHECK_THROWS_AS(census(30, 1, t), config_error);
    CHECK_THROWS_AS(census(30, 17, t), config_error);
}

TEST_CASE("census matches ordered factorisation enumeration") {
    const auto t = build_sieve(3'000);
    for (std::uint64_t n = 1; n <= 3'000; n += 7) {
        if (!oracle::squarefree(n)) {
            continue;
        }
        for (const int k : {2, 3, 4}) {
            const auto ref = oracle::census(n, k);
            const auto r = census(n, k, t);
            REQUIRE(r.tau_k == ref.tau);
            REQUIRE(r.g_k == ref.g);
        }
    }
}

TEST_CASE("g_2 equals tau for squarefree n > 1") {
    const auto t = build_sieve(10'000);
    for (std::uint64_t n = 2; n <= 10'000; ++n) {
        if (t.is_squarefree(n)) {
            REQUIRE(census(n, 2, t).g_k == oracle::divisors(n).size());
        }
    }
}

TEST_CASE("slot symmetry and complementary counts") {
    const std::vector<std::vector<std::uint64_t>> cases = {
        {2, 3, 5}, {2, 3, 5, 7, 11}, {3, 7, 11, 13, 101}, {2, 5, 13, 17, 19, 23, 29}};
    for (const auto& primes : cases) {
        for (const int k : {2, 3, 4, 5}) {
            const auto r = census_of_primes(primes, k);
            CHECK(r.g_k == relabelled_g(primes, k));
            CHECK(r.g_k <= static_cast<std::uint64_t>(k) * r.tau_k);
            CHECK(r.tau_k <= r.g_k);
            CHECK(r.g_k <= static_cast<std::uint64_t>(k - 1) * r.tau_k);
        }
    }
}

TEST_CASE("budget") {
    // 4^15 > 10^8 >= 3^15
    const std::vector<std::uint64_t> primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
    CHECK_THROWS_AS(census_of_primes(primes, 4), range_error);
    const auto r = census_of_primes(primes, 3);
    CHECK(r.tau_k == 14'348'907);
    CHECK(r.enumerated == r.tau_k);
    CHECK(r.tau_k <= r.g_k);
    CHECK(r.g_k <= 2 * r.tau_k);
}

TEST_CASE("seeded samples") {
    const auto t = build_sieve(1'000'000);
    const auto a = census_sample(4, 3, 40, 99, t);
    const auto b = census_sample(4, 3, 40, 99, t, SampleSource::sieve_index, Threads{4});
    REQUIRE(a.records.size() == 40);
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        const auto& r = a.records[i];
        CHECK(r.n == b.records[i].n);
        CHECK(r.g_k == b.records[i].g_k);
        CHECK(r.omega_n == 4);
        CHECK(r.n <= 1'000'000);
        CHECK(t.is_squarefree(r.n));
        CHECK(r.tau_k <= r.g_k);
        CHECK(r.g_k <= 2 * r.tau_k);
        seen.insert(r.n);
    }
    CHECK(seen.size() == 40);
    CHECK(a.mean_ratio == b.mean_ratio);
    CHECK(census_sample(4, 3, 40, 100, t).records[0].n != a.records[0].n);
    for (const auto& r : census_sample(5, 2, 30, 3, t).records) {
        CHECK(r.ratio == 1.0);
    }
    CHECK_THROWS_AS(census_sample(0, 3, 5, 1, t), domain_error);
    CHECK_THROWS_AS(census_sample(8, 3, 5, 1, t), range_error);
}

TEST_CASE("prime pool samples reach large omega") {
    const auto t = build_sieve(100);
    const auto s = census_sample(12, 3, 50, 7, t, SampleSource::prime_pool);
    REQUIRE(s.records.size() == 50);
    for (const auto& r : s.records) {
        CHECK(r.omega_n == 12);
        CHECK(r.ratio >= 1.0);
        CHECK(r.ratio <= 2.0);
    }
    CHECK(s.distance_from_half_k == doctest::Approx(std::abs(s.mean_ratio - 1.5)));
}

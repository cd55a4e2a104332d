#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "smalldiv/error.hpp"
#include "smalldiv/sieve.hpp"

using namespace smalldiv;

TEST_CASE("mobius values up to 10") {
    const auto t = build_sieve(10);
    const int expected[] = {1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    for (int n = 1; n <= 10; ++n) {
        CHECK(t.mu(n) == expected[n - 1]);
    }
}

TEST_CASE("smallest tables") {
    const auto t = build_sieve(2);
    CHECK(t.spf(1) == 1);
    CHECK(t.spf(2) == 2);
    CHECK(t.omega(1) == 0);
    CHECK(t.omega(2) == 1);
    CHECK(build_sieve(30).omega(30) == 3);
}

TEST_CASE("limit outside [2, 2^31] is a configuration error") {
    CHECK_THROWS_AS(build_sieve(1), config_error);
    CHECK_THROWS_AS(build_sieve(0), config_error);
    CHECK_THROWS_AS(build_sieve((std::uint64_t{1} << 31) + 1), config_error);
}

TEST_CASE("tables agree with trial division") {
    const std::uint64_t limit = 20'000;
    const auto t = build_sieve(limit);
    for (std::uint64_t n = 1; n <= limit; ++n) {
        REQUIRE(t.mu(n) == oracle::mu(n));
        REQUIRE(t.omega(n) == oracle::omega(n));
        REQUIRE(t.is_prime(n) == oracle::prime(n));
        if (n > 1) {
            REQUIRE(t.spf(n) == oracle::prime_factors(n).front());
        }
    }
    std::size_t primes = 0;
    for (std::uint64_t n = 2; n <= limit; ++n) {
        primes += oracle::prime(n) ? 1 : 0;
    }
    CHECK(t.primes().size() == primes);
    CHECK(primes_up_to(limit) == t.primes());
}

TEST_CASE("distinct primes") {
    const auto t = build_sieve(100);
    CHECK(distinct_primes(30, t) == std::vector<std::uint32_t>{2, 3, 5});
    CHECK(distinct_primes(1, t).empty());
    CHECK(distinct_primes(12, t) == std::vector<std::uint32_t>{2, 3});
    CHECK_THROWS_AS(distinct_primes(101, t), range_error);
    CHECK_THROWS_AS(distinct_primes(0, t), range_error);
    for (std::uint64_t n = 1; n <= 100; ++n) {
        const auto ps = distinct_primes(n, t);
        const auto ref = oracle::prime_factors(n);
        REQUIRE(std::vector<std::uint64_t>(ps.begin(), ps.end()) == ref);
    }
}

TEST_CASE("coprime squarefree counts") {
    const auto t = build_sieve(5'000);
    CHECK(squarefree_coprime_count(10, 1, t) == 7);
    CHECK(squarefree_coprime_count(20, 6, t) == 7);
    CHECK(squarefree_coprime_count(1, 30, t) == 1);
    CHECK_THROWS_AS(squarefree_coprime_count(10, 12, t), domain_error);
    CHECK_THROWS_AS(squarefree_coprime_count(5'001, 1, t), range_error);
    for (const std::uint64_t m : {1, 2, 3, 5, 6, 7, 30, 105, 210, 2310}) {
        for (const std::uint64_t x : {1, 2, 17, 100, 999, 5000}) {
            REQUIRE(squarefree_coprime_count(x, m, t) == oracle::coprime_squarefree(x, m));
        }
    }
}

TEST_CASE("omega class counts") {
    const auto t = build_sieve(10'000);
    CHECK(omega_class_counts(10, t) == OmegaCounts{1, 4, 2});
    CHECK(omega_class_counts(1, t) == OmegaCounts{1});
    const auto c30 = omega_class_counts(30, t);
    std::uint64_t total = 0;
    for (const auto c : c30) {
        total += c;
    }
    CHECK(total == 19);
}

TEST_CASE("squarefree count is near 6x/pi^2") {
    const auto t = build_sieve(200'000);
    for (const std::uint64_t x : {100, 1'000, 12'345, 100'000, 200'000}) {
        const auto q = squarefree_coprime_count(x, 1, t);
        const auto classes = omega_class_counts(x, t);
        std::uint64_t total = 0;
        for (const auto c : classes) {
            total += c;
        }
        CHECK(total == q);
        const double main = 6.0 / (std::numbers::pi * std::numbers::pi) * static_cast<double>(x);
        CHECK(std::abs(static_cast<double>(q) - main) <= 2.0 * std::sqrt(static_cast<double>(x)));
    }
}

TEST_CASE("weighted omega classes reproduce per-n sums of z^omega") {
    const auto t = build_sieve(10'000);
    const auto classes = omega_class_counts(10'000, t);
    for (const std::uint64_t z : {0, 1, 2, 3, 5}) {
        std::uint64_t from_classes = 0;
        std::uint64_t zp = 1;
        for (const auto c : classes) {
            from_classes += c * zp;
            zp *= z;
        }
        std::uint64_t direct = 0;
        for (std::uint64_t n = 1; n <= 10'000; ++n) {
            if (oracle::squarefree(n)) {
                std::uint64_t term = 1;
                for (int i = 0; i < oracle::omega(n); ++i) {
                    term *= z;
                }
                direct += term;
            }
        }
        CHECK(from_classes == direct);
    }
}

TEST_CASE("sieve output does not depend on the thread count") {
    const auto a = build_sieve(300'000);
    const auto b = build_sieve(300'000);
    CHECK(std::equal(a.spf_table().begin(), a.spf_table().end(), b.spf_table().begin()));
    CHECK(std::equal(a.mu_table().begin(), a.mu_table().end(), b.mu_table().begin()));
    CHECK(std::equal(a.omega_table().begin(), a.omega_table().end(), b.omega_table().begin()));
    CHECK(omega_class_counts(300'000, a, Threads{1}) == omega_class_counts(300'000, a, Threads{4}));
}

TEST_CASE("squarefree listings") {
    const auto t = build_sieve(100);
    CHECK(t.squarefree_up_to(10) == std::vector<std::uint32_t>{1, 2, 3, 5, 6, 7, 10});
    CHECK(t.squarefree_with_omega(2, 30) ==
          std::vector<std::uint32_t>{6, 10, 14, 15, 21, 22, 26});
    CHECK(t.squarefree_with_omega(3, 100) == std::vector<std::uint32_t>{30, 42, 66, 70, 78});
}

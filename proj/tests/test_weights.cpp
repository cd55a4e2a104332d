#include <doctest.h>

#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "smalldiv/error.hpp"
#include "smalldiv/weights.hpp"

using namespace smalldiv;
using doctest::Approx;

TEST_CASE("h at squarefree arguments") {
    const auto t = build_sieve(100);
    CHECK(h_eval(30, PrimeWeight(0.5), t) == Approx(0.125));
    CHECK(h_eval(1, PrimeWeight(0.7), t) == 1.0);
    CHECK(h_eval(6, PrimeWeight(0.5, {{2, 0.1}}), t) == Approx(0.05));
    CHECK(h_eval(35, PrimeWeight(0.5, {{2, 0.1}}), t) == Approx(0.25));
    CHECK_THROWS_AS(h_eval(12, PrimeWeight(0.5), t), domain_error);
    CHECK(h_eval(30, PrimeWeight(0.0), t) == 0.0);
    CHECK(h_eval(1, PrimeWeight(0.0), t) == 1.0);
}

TEST_CASE("g at squarefree arguments") {
    const auto t = build_sieve(100);
    CHECK(g_eval(6, t) == Approx(0.5));
    CHECK(g_eval(1, t) == 1.0);
    CHECK(g_eval(2, t) == Approx(2.0 / 3.0));
    CHECK_THROWS_AS(g_eval(4, t), domain_error);
}

TEST_CASE("tau_k") {
    const auto t = build_sieve(1'000);
    CHECK(tau_k_squarefree(30, 3, t) == 27);
    CHECK(tau_k_squarefree(1, 7, t) == 1);
    CHECK(tau_k_squarefree(6, 2, t) == 4);
    CHECK(oracle::census(6, 2).tau == 4);
    CHECK_THROWS_AS(tau_k_squarefree(4, 2, t), domain_error);
}

TEST_CASE("tau_k overflow is a range error") {
    // 30030 has six primes; 2000^6 > 2^64 > 1500^6.
    const auto t = build_sieve(30'030);
    CHECK(tau_k_squarefree(30'030, 1'500, t) == 11'390'625'000'000'000'000ull);
    CHECK_THROWS_AS(tau_k_squarefree(30'030, 2'000, t), range_error);
}

TEST_CASE("E(m)") {
    const auto t = build_sieve(100);
    CHECK(e_of_m(1, t) == 1.0);
    CHECK(e_of_m(2, t) == Approx(1.0 + 1.0 / std::sqrt(2.0)));
    double direct = 0.0;
    for (const auto d : oracle::divisors(30)) {
        direct += 1.0 / std::sqrt(static_cast<double>(d));
    }
    CHECK(e_of_m(30, t) == Approx(direct).epsilon(1e-14));
    CHECK(direct == Approx(3.897).epsilon(1e-3));
    CHECK(e_of_m(30, t) < 8.0);
    CHECK_THROWS_AS(e_of_m(12, t), domain_error);
    std::vector<std::uint32_t> many(26);
    CHECK_THROWS_AS(e_of_primes(many), range_error);
}

TEST_CASE("weight validation") {
    CHECK_THROWS_AS(PrimeWeight(-0.1), config_error);
    CHECK_THROWS_AS(PrimeWeight(std::nan("")), config_error);
    CHECK_THROWS_AS(PrimeWeight(0.5, {}, 3), config_error);  // strict: c < 1/2
    CHECK_NOTHROW(PrimeWeight(0.5, {}, 3, false));
    CHECK_THROWS_AS(PrimeWeight(0.2, {{2, 0.9}}, 3), config_error);
    CHECK_THROWS_AS(PrimeWeight(0.2, {{4, 0.1}}), domain_error);
    CHECK_THROWS_AS(PrimeWeight(0.2, {}, 1), config_error);
    CHECK_NOTHROW(PrimeWeight(0.0));
    const auto t = build_sieve(100);
    CHECK_THROWS_AS(PrimeWeight(0.2, {{101, 0.1}}).check_against(t), range_error);
    CHECK_NOTHROW(PrimeWeight(0.2, {{97, 0.1}}).check_against(t));
}

TEST_CASE("multiplicativity on coprime squarefree pairs") {
    const std::uint64_t limit = 3'000;
    const auto t = build_sieve(limit);
    const PrimeWeight w(0.37, {{3, 0.05}, {7, 0.9}});
    for (std::uint64_t a = 1; a <= 60; ++a) {
        for (std::uint64_t b = 1; b <= 50; ++b) {
            if (!oracle::squarefree(a) || !oracle::squarefree(b) || std::gcd(a, b) != 1) {
                continue;
            }
            CHECK(h_eval(a * b, w, t) == Approx(h_eval(a, w, t) * h_eval(b, w, t)).epsilon(1e-14));
            CHECK(g_eval(a * b, t) == Approx(g_eval(a, t) * g_eval(b, t)).epsilon(1e-14));
            CHECK(tau_k_squarefree(a * b, 4, t) == tau_k_squarefree(a, 4, t) * tau_k_squarefree(b, 4, t));
        }
    }
}

TEST_CASE("E(m) bound on squarefree m up to 10^5") {
    const std::uint64_t limit = 100'000;
    const auto t = build_sieve(limit);
    for (std::uint64_t m = 1; m <= limit; ++m) {
        if (t.is_squarefree(m)) {
            const double tau = std::pow(2.0, t.omega(m));
            REQUIRE(e_of_m(m, t) < 2.0 * std::pow(tau, 2.0 / 3.0));
        }
    }
}

TEST_CASE("pointwise product stays under its ceiling in strict mode") {
    const auto primes = primes_up_to(10'000);
    for (const int k : {2, 3, 4, 7}) {
        const double c = 0.999 / (k - 1);
        const PrimeWeight w(c, {{2, 0.5 / (k - 1)}}, k);
        for (const auto p : primes) {
            REQUIRE(pointwise_product(p, w) <= pointwise_ceiling(k));
        }
    }
}

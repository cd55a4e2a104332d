#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "smalldiv/divisor_sums.hpp"
#include "smalldiv/error.hpp"

using namespace smalldiv;
using doctest::Approx;

TEST_CASE("integer k-th roots") {
    CHECK(integer_kth_root(26, 3) == 2);
    CHECK(integer_kth_root(27, 3) == 3);
    CHECK(integer_kth_root(1'000'000, 2) == 1000);
    CHECK(integer_kth_root(1, 5) == 1);
    CHECK(integer_kth_root(0, 2) == 0);
    CHECK(integer_kth_root(~std::uint64_t{0}, 2) == 4'294'967'295u);
    CHECK(integer_kth_root(~std::uint64_t{0}, 64) == 1);
    CHECK(integer_kth_root(~std::uint64_t{0}, 63) == 2);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 20'000; ++i) {
        const std::uint64_t n = rng() >> (rng() % 64);
        const int k = 2 + static_cast<int>(rng() % 12);
        REQUIRE(integer_kth_root(n == 0 ? 1 : n, k) == oracle::kth_root(n == 0 ? 1 : n, k));
    }
    for (std::uint64_t r = 2; r < 2'000; ++r) {
        REQUIRE(integer_kth_root(r * r * r, 3) == r);
        REQUIRE(integer_kth_root(r * r * r - 1, 3) == r - 1);
    }
}

TEST_CASE("single-n divisor sums") {
    const auto t = build_sieve(100);
    CHECK(full_divisor_sum(30, PrimeWeight(0.5), t) == Approx(3.375));
    CHECK(full_divisor_sum(1, PrimeWeight(0.5), t) == 1.0);
    CHECK(full_divisor_sum(10, PrimeWeight(1.0, {}, 2, false), t) == 4.0);
    for (const double c : {0.1, 0.3, 0.45}) {
        CHECK(small_divisor_sum(30, 3, PrimeWeight(c, {}, 3), t) == Approx(1 + 2 * c));
        CHECK(small_divisor_sum(6, 2, PrimeWeight(c), t) == Approx(1 + c));
        CHECK(small_divisor_sum(1, 4, PrimeWeight(c, {}, 4, false), t) == 1.0);
    }
    CHECK_THROWS_AS(full_divisor_sum(12, PrimeWeight(0.5), t), domain_error);
    for (std::uint64_t n = 1; n <= 100; ++n) {
        if (!oracle::squarefree(n)) {
            continue;
        }
        CHECK(full_divisor_sum(n, PrimeWeight(0.3), t) ==
              Approx(std::pow(1.3, oracle::omega(n))).epsilon(1e-12));
    }
}

TEST_CASE("S_full small cases across methods") {
    const auto t = build_sieve(100);
    for (const auto m : {FullMethod::n_major, FullMethod::d_major, FullMethod::omega_identity}) {
        CAPTURE(to_string(m));
        CHECK(s_full(10, PrimeWeight(1.0, {}, 2, false), t, m).value == 17.0);
        CHECK(s_full(10, PrimeWeight(0.0), t, m).value == 7.0);
        CHECK(s_full(10, PrimeWeight(0.5), t, m).value == Approx(11.5));
        CHECK(s_full(1, PrimeWeight(0.5), t, m).value == 1.0);
    }
}

TEST_CASE("S_small small cases across methods") {
    const auto t = build_sieve(100);
    for (const auto m : {SmallMethod::n_major, SmallMethod::d_major}) {
        CAPTURE(to_string(m));
        CHECK(s_small(10, 2, PrimeWeight(1.0, {}, 2, false), t, m).value == 9.0);
        CHECK(s_small(10, 4, PrimeWeight(1.0, {}, 4, false), t, m).value == 7.0);
        CHECK(s_small(1, 3, PrimeWeight(0.2, {}, 3), t, m).value == 1.0);
    }
    CHECK(oracle::s_small(10, 2, 1.0) == 9.0);
    CHECK(oracle::s_small(10, 4, 1.0) == 7.0);
}

TEST_CASE("S_full and S_small against brute force, with overrides") {
    const std::uint64_t x = 1'500;
    const auto t = build_sieve(x);
    const PrimeWeight w(0.27, {{2, 0.05}, {5, 0.4}, {13, 0.0}}, 3);
    const double ref_full = [&] {
        double s = 0.0;
        for (std::uint64_t n = 1; n <= x; ++n) {
            if (oracle::squarefree(n)) {
                for (const auto d : oracle::divisors(n)) {
                    double h = 1.0;
                    for (const auto p : oracle::prime_factors(d)) {
                        h *= p == 2 ? 0.05 : p == 5 ? 0.4 : p == 13 ? 0.0 : 0.27;
                    }
                    s += h;
                }
            }
        }
        return s;
    }();
    CHECK(s_full(x, w, t, FullMethod::n_major).value == Approx(ref_full).epsilon(1e-12));
    CHECK(s_full(x, w, t, FullMethod::d_major).value == Approx(ref_full).epsilon(1e-12));
    CHECK_THROWS_AS(s_full(x, w, t, FullMethod::omega_identity), config_error);
    for (const int k : {2, 3, 4, 5}) {
        const PrimeWeight wk(0.1, {{3, 0.2}}, k);
        const double ref = oracle::s_small(x, k, 0.1, 3, 0.2);
        CHECK(s_small(x, k, wk, t, SmallMethod::n_major).value == Approx(ref).epsilon(1e-12));
        CHECK(s_small(x, k, wk, t, SmallMethod::d_major).value == Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("methods agree at class level, with flag primes") {
    const std::uint64_t x = 60'000;
    const auto t = build_sieve(x);
    const std::vector<std::uint32_t> flags{2, 7, 11};
    for (const std::uint64_t xi : {1, 2, 29, 1'000, 60'000}) {
        CHECK(full_class_counts(xi, flags, t, FullMethod::n_major) ==
              full_class_counts(xi, flags, t, FullMethod::d_major));
        CHECK(full_class_counts(xi, {}, t, FullMethod::n_major) ==
              full_class_counts(xi, {}, t, FullMethod::omega_identity));
        for (const int k : {2, 3, 4, 6}) {
            CHECK(small_class_counts(xi, k, flags, t, SmallMethod::n_major) ==
                  small_class_counts(xi, k, flags, t, SmallMethod::d_major));
        }
    }
}

TEST_CASE("class counts do not depend on the thread count") {
    const std::uint64_t x = 300'000;
    const auto t = build_sieve(x);
    for (const auto m : {FullMethod::n_major, FullMethod::d_major}) {
        CHECK(full_class_counts(x, {3}, t, m, Threads{1}) ==
              full_class_counts(x, {3}, t, m, Threads{3}));
    }
    for (const auto m : {SmallMethod::n_major, SmallMethod::d_major}) {
        CHECK(small_class_counts(x, 3, {3}, t, m, Threads{1}) ==
              small_class_counts(x, 3, {3}, t, m, Threads{4}));
    }
    const PrimeWeight w(0.3, {}, 3);
    CHECK(ratio(x, 3, w, t, Threads{1}).ratio == ratio(x, 3, w, t, Threads{2}).ratio);
}

TEST_CASE("ratio") {
    const auto t = build_sieve(100'000);
    CHECK(ratio(1, 3, PrimeWeight(0.3, {}, 3), t).ratio == 1.0);
    const auto r = ratio(10, 2, PrimeWeight(1.0, {}, 2, false), t);
    CHECK(r.ratio == Approx(9.0 / 17.0));
    CHECK(r.predicted_limit == Approx(0.5));
    for (const int k : {2, 3, 4}) {
        for (const double c : {0.0, 0.1, 0.3}) {
            for (const std::uint64_t x : {1, 10, 1'000, 100'000}) {
                const auto rk = ratio(x, k, PrimeWeight(c, {}, k), t);
                CHECK(rk.s_small <= rk.s_full);
                CHECK(rk.ratio > 0.0);
                CHECK(rk.ratio <= 1.0);
            }
        }
    }
    // c = 0 leaves only d = 1, so every n contributes 1 to both sums.
    CHECK(ratio(100'000, 2, PrimeWeight(0.0), t).ratio == 1.0);
    CHECK(ratio(100'000, 2, PrimeWeight(1e-6), t).ratio == Approx(1.0).epsilon(1e-3));
}

TEST_CASE("H series") {
    const auto t = build_sieve(10'000);
    CHECK(h_series(1, PrimeWeight(0.5), 2, t) == 1.0);
    CHECK(h_series(3, PrimeWeight(0.5), 2, t) == Approx(1.125));
    CHECK(h_series(10, PrimeWeight(0.0), 3, t) == 1.0);
    CHECK_THROWS_AS(h_series(10, PrimeWeight(0.5), 4, t), domain_error);
    const PrimeWeight w(0.3, {{5, 0.7}});
    const auto prefix = h_series_prefix(10'000, w, 3, t);
    REQUIRE(prefix.size() == 10'001);
    CHECK(prefix[0] == 0.0);
    double ref = 0.0;
    for (std::uint64_t j = 1; j <= 10'000; ++j) {
        if (j % 3 != 0 && oracle::squarefree(j)) {
            ref += oracle::g(j) * oracle::h(j, 0.3, 5, 0.7) / static_cast<double>(j);
        }
        REQUIRE(prefix[j] >= prefix[j - 1]);
        REQUIRE(prefix[j] == Approx(ref).epsilon(1e-13));
    }
    CHECK(h_series(10'000, w, 3, t) == prefix.back());
}

namespace {

// A, C sum h(d/p) over d divisible by p; B, D sum h(d) over d coprime to p.
struct Abcd {
    double a = 0, b = 0, c = 0, d = 0;
};

Abcd brute_abcd(std::uint64_t x, int k, double cval, std::uint64_t p) {
    Abcd out;
    for (std::uint64_t n = 1; n <= x; ++n) {
        if (!oracle::squarefree(n)) {
            continue;
        }
        for (const auto d : oracle::divisors(n)) {
            const bool small = oracle::small(d, n, k);
            if (d % p == 0) {
                const double h = oracle::h(d / p, cval);
                out.c += h;
                out.a += small ? h : 0.0;
            } else {
                const double h = oracle::h(d, cval);
                out.d += h;
                out.b += small ? h : 0.0;
            }
        }
    }
    return out;
}

}  // namespace

TEST_CASE("A, B, C, D against brute force") {
    const std::uint64_t x = 2'000;
    const auto t = build_sieve(x);
    for (const std::uint32_t p : {2u, 3u, 7u, 1'999u}) {
        for (const int k : {2, 3}) {
            const auto r = abcd(x, k, PrimeWeight(0.3, {}, k), p, t);
            const auto ref = brute_abcd(x, k, 0.3, p);
            CAPTURE(p);
            CAPTURE(k);
            CHECK(r.a == Approx(ref.a).epsilon(1e-12));
            CHECK(r.b == Approx(ref.b).epsilon(1e-12));
            CHECK(r.c == Approx(ref.c).epsilon(1e-12));
            CHECK(r.d == Approx(ref.d).epsilon(1e-12));
            CHECK(r.small_identity_exact);
            CHECK(r.full_identity_exact);
        }
    }
}

TEST_CASE("A, B, C, D edge cases") {
    const auto t = build_sieve(1'000);
    const auto below = abcd(10, 3, PrimeWeight(0.3, {}, 3), 11, t);
    CHECK(below.a == 0.0);
    CHECK(below.c == 0.0);
    CHECK(below.b == s_small(10, 3, PrimeWeight(0.3, {}, 3), t).value);
    CHECK(below.d == s_full(10, PrimeWeight(0.3), t).value);
    const auto tiny = abcd(10, 2, PrimeWeight(1.0, {}, 2, false), 2, t);
    CHECK(tiny.h_p * tiny.a + tiny.b == 9.0);
    CHECK(tiny.h_p * tiny.c + tiny.d == 17.0);
    CHECK_THROWS_AS(abcd(10, 2, PrimeWeight(0.3), 4, t), domain_error);
    CHECK_THROWS_AS(abcd(10, 2, PrimeWeight(0.3), 1'009, t), range_error);
}

TEST_CASE("ratio is a Mobius function of h(p)") {
    const std::uint64_t x = 50'000;
    const auto t = build_sieve(x);
    for (const std::uint32_t p : {2u, 3u, 5u}) {
        const auto r = abcd(x, 3, PrimeWeight(0.3, {}, 3), p, t);
        CHECK(r.ad_minus_bc() < 0.0);
        double previous = 2.0;
        for (const double v : {0.0, 0.1, 0.2, 0.3, 0.4}) {
            const PrimeWeight w(0.3, {{p, v}}, 3);
            const double direct = ratio(x, 3, w, t).ratio;
            const double mobius = (r.a * v + r.b) / (r.c * v + r.d);
            CHECK(direct == Approx(mobius).epsilon(1e-12));
            CHECK(direct < previous);
            previous = direct;
        }
    }
}

TEST_CASE("class count bookkeeping") {
    ClassCounts a({3, 5});
    a.add(2, a.flag_bit(3), 4);
    a.add(0, 0, 1);
    CHECK(a.total() == 5);
    const PrimeWeight w(0.5, {{3, 0.1}, {5, 0.2}});
    // 1 * 1 + 4 * h(3) * c^(2-1)
    CHECK(a.evaluate(w) == Approx(1.0 + 4 * 0.1 * 0.5));
    const auto wide = a.widen({2, 3, 5});
    CHECK(wide.total() == 5);
    CHECK(wide.evaluate(w) == a.evaluate(w));
    const auto lifted = a.lift_by_prime(2);
    CHECK(lifted.count(1, lifted.flag_bit(2)) == 1);
    CHECK(lifted.count(3, lifted.flag_bit(2) | lifted.flag_bit(3)) == 4);
    CHECK_THROWS(ClassCounts({5, 3}));
    CHECK_THROWS(ClassCounts({2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}));
}

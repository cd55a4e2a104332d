#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "smalldiv/class_counts.hpp"
#include "smalldiv/int_math.hpp"
#include "smalldiv/parallel.hpp"
#include "smalldiv/sieve.hpp"
#include "smalldiv/weights.hpp"

namespace smalldiv {

// Averaged divisor sums over squarefree n <= x:
//
//   S_full(x, h)     = sum_{n <= x} mu^2(n) sum_{d | n} h(d)
//   S_small(x, k, h) = sum_{n <= x} mu^2(n) sum_{d | n, d^k <= n} h(d)
//
// "d <= n^(1/k)" is always realised as the integer test d^k <= n.

enum class FullMethod {
    n_major,         // enumerate the divisors of every squarefree n
    d_major,         // per squarefree d, count squarefree cofactors m <= x/d coprime to d
    omega_identity,  // binomial expansion of omega-class counts; override-free only
};

enum class SmallMethod {
    n_major,  // enumerate the divisors of every squarefree n, keep d^k <= n
    d_major,  // per squarefree d <= x^(1/k), count m in [d^(k-1), x/d] coprime to d
};

std::string_view to_string(FullMethod m);
std::string_view to_string(SmallMethod m);

struct SumResult {
    ClassCounts classes;
    double value = 0.0;
};

struct RatioReport {
    std::uint64_t x = 0;
    int k = 2;
    PrimeWeight weight{0.0};
    double s_full = 0.0;
    double s_small = 0.0;
    double ratio = 1.0;
    double predicted_limit = 1.0;  // k^(-c)
};

/// A, B, C, D: the four exact double sums that split S_small and S_full by
/// divisibility of d by a fixed prime p:
///   S_small = h(p) A + B,   S_full = h(p) C + D.
/// A and C run over m = d / p; B and D over d with p not dividing d.
struct AbcdResult {
    std::uint32_t p = 0;
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    ClassCounts a_classes, b_classes, c_classes, d_classes;
    double h_p = 0.0;
    double s_small = 0.0;  // n_major, for the identity check
    double s_full = 0.0;
    bool small_identity_exact = false;  // class-level h(p)A + B == S_small
    bool full_identity_exact = false;   // class-level h(p)C + D == S_full

    double ad_minus_bc() const { return a * d - b * c; }
    double residual_small() const { return h_p * a + b - s_small; }
    double residual_full() const { return h_p * c + d - s_full; }
};

/// sum_{d | n} h(d) for squarefree n <= limit.
double full_divisor_sum(std::uint64_t n, const PrimeWeight& w, const SieveTables& tables);

/// sum_{d | n, d^k <= n} h(d) for squarefree n <= limit.
double small_divisor_sum(std::uint64_t n, int k, const PrimeWeight& w, const SieveTables& tables);

ClassCounts full_class_counts(std::uint64_t x, const std::vector<std::uint32_t>& flag_primes,
                              const SieveTables& tables, FullMethod method,
                              Threads threads = {});

ClassCounts small_class_counts(std::uint64_t x, int k,
                               const std::vector<std::uint32_t>& flag_primes,
                               const SieveTables& tables, SmallMethod method,
                               Threads threads = {});

SumResult s_full(std::uint64_t x, const PrimeWeight& w, const SieveTables& tables,
                 FullMethod method = FullMethod::n_major, Threads threads = {});

SumResult s_small(std::uint64_t x, int k, const PrimeWeight& w, const SieveTables& tables,
                  SmallMethod method = SmallMethod::n_major, Threads threads = {});

RatioReport ratio(std::uint64_t x, int k, const PrimeWeight& w, const SieveTables& tables,
                  Threads threads = {});

/// H(x, h, p) = sum_{j <= x, p does not divide j} mu^2(j) g(j) h(j) / j,
/// summed in ascending j with compensation.
double h_series(std::uint64_t x, const PrimeWeight& w, std::uint32_t p,
                const SieveTables& tables);

/// H(j, h, p) for every j in [0, x]; entry 0 is 0.
std::vector<double> h_series_prefix(std::uint64_t x, const PrimeWeight& w, std::uint32_t p,
                                    const SieveTables& tables);

AbcdResult abcd(std::uint64_t x, int k, const PrimeWeight& w, std::uint32_t p,
                const SieveTables& tables, Threads threads = {});

}  // namespace smalldiv

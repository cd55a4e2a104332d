#pragma once

#include <cstdint>
#include <numbers>
#include <span>

#include "smalldiv/parallel.hpp"
#include "smalldiv/sieve.hpp"

namespace smalldiv {

inline constexpr double zeta_2 = std::numbers::pi * std::numbers::pi / 6.0;
inline constexpr double six_over_pi_squared = 6.0 / (std::numbers::pi * std::numbers::pi);
inline constexpr std::uint64_t default_truncation = 1'000'000;

/// Truncated Euler product with a bound on the omitted tail.
struct EulerConstant {
    double z = 0.0;
    double value = 0.0;
    std::uint64_t truncation_prime = 0;  // largest prime included
    double tail_bound = 0.0;             // bound on |log(full product / value)|
};

/// f0(z) = prod_p (1 + z/p)(1 - 1/p)^z over p <= truncation.
EulerConstant f0(double z, std::uint64_t truncation = default_truncation);

/// f1(z) = prod_p (1 + z/(p+1))(1 - 1/p)^z over p <= truncation.
EulerConstant f1(double z, std::uint64_t truncation = default_truncation);

/// Same products over a caller-supplied ascending list of all primes <= bound.
EulerConstant f0(double z, std::span<const std::uint32_t> primes, std::uint64_t bound);
EulerConstant f1(double z, std::span<const std::uint32_t> primes, std::uint64_t bound);

/// Upper bound on sum_{p > bound} 1/p^2 (bound >= 100).
double prime_square_tail(std::uint64_t bound);

/// Real Gamma function for z > 0 (Lanczos, g = 7, nine terms).
double gamma_fn(double z);

/// Standard normal mass of [a, b].
double gaussian_window(double a, double b);

/// 2^{2/3} c.
double t_c(double c);

/// The c below which t_c - 1 < c: 1 / (2^{2/3} - 1), about 1.70241.
double t_c_threshold();

/// Main-term predictor (6/pi^2) f1(c) / (c Gamma(c)) x log^c x for S_full.
double predict_s_full(double x, double c, std::uint64_t truncation = default_truncation);

/// predict_s_full / k^c.
double predict_s_small(double x, int k, double c,
                       std::uint64_t truncation = default_truncation);

/// The same S_full main term through f0(1 + c) / Gamma(1 + c) x log^c x.
double predict_s_full_via_f0(double x, double c, std::uint64_t truncation = default_truncation);

/// sum_{n <= x} z^omega(n) mu^2(n), times g(n) when `weighted`.
double selberg_exact(std::uint64_t x, double z, bool weighted, const SieveTables& tables,
                     Threads threads = {});

/// x log^{z-1} x f(z) / Gamma(z), with f = f1 when weighted, else f0.
double selberg_predictor(double x, double z, bool weighted,
                         std::uint64_t truncation = default_truncation);

}  // namespace smalldiv

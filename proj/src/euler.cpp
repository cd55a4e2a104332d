#include "smalldiv/euler.hpp"

#include <array>
#include <cmath>
#include <string>

#include "smalldiv/compensated_sum.hpp"
#include "smalldiv/error.hpp"

namespace smalldiv {

namespace {

void check_z(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw domain_error("Euler products need real z > 0");
    }
}

void check_truncation(std::uint64_t bound) {
    if (bound < 100) {
        throw config_error("truncation bound must be at least 100");
    }
}

template <typename LogFactor>
EulerConstant euler_product(double z, std::span<const std::uint32_t> primes,
                            std::uint64_t bound, double tail_coefficient, LogFactor log_factor) {
    check_z(z);
    check_truncation(bound);
    CompensatedSum log_sum;
    std::uint32_t largest = 0;
    for (const auto p : primes) {
        if (p > bound) {
            break;
        }
        log_sum.add(log_factor(static_cast<double>(p)));
        largest = p;
    }
    // |log factor| <= K / p^2 with K = tail_coefficient plus a cubic correction.
    const double b = static_cast<double>(bound);
    const double cubic = (z * z * z + z / (1.0 - 1.0 / b)) / (3.0 * b);
    return EulerConstant{z, std::exp(log_sum.value()), largest,
                         (tail_coefficient + cubic) * prime_square_tail(bound)};
}

}  // namespace

double prime_square_tail(std::uint64_t bound) {
    check_truncation(bound);
    // Partial summation, sum_{p > P} p^-2 = -pi(P)/P^2 + 2 int_P^inf pi(t) t^-3 dt,
    // against Dusart's bounds
    //   pi(x) >= x/ln x (1 + 1/ln x)                     (x >= 599)
    //   pi(x) <= x/ln x (1 + 1.2762/ln x)                (x >= 599)
    //   pi(x) <= x/ln x (1 + 1/ln x + 2.51/ln^2 x)       (x >= 355991)
    // The last, with int_P^inf dt/(t^2 ln t) <= (1 - 1/L + 2/L^2)/(P L) by parts,
    // gives (1 - 1/L + 9.02/L^2)/(P L); the second gives (1 + 1.5524/L)/(P L).
    // Below 599 only pi(x) <= 1.25506 x / ln x is used.
    const double p = static_cast<double>(bound);
    const double l = std::log(p);
    if (bound >= 355'991) {
        return (1.0 - 1.0 / l + 9.02 / (l * l)) / (p * l);
    }
    if (bound >= 599) {
        return (1.0 + 1.5524 / l) / (p * l);
    }
    return 2.0 * 1.25506 / (p * l);
}

EulerConstant f0(double z, std::span<const std::uint32_t> primes, std::uint64_t bound) {
    return euler_product(z, primes, bound, z * (z + 1.0) / 2.0, [z](double p) {
        return std::log1p(z / p) + z * std::log1p(-1.0 / p);
    });
}

EulerConstant f1(double z, std::span<const std::uint32_t> primes, std::uint64_t bound) {
    return euler_product(z, primes, bound, z * (z + 3.0) / 2.0, [z](double p) {
        return std::log1p(z / (p + 1.0)) + z * std::log1p(-1.0 / p);
    });
}

EulerConstant f0(double z, std::uint64_t truncation) {
    check_z(z);
    check_truncation(truncation);
    const auto primes = primes_up_to(truncation);
    return f0(z, primes, truncation);
}

EulerConstant f1(double z, std::uint64_t truncation) {
    check_z(z);
    check_truncation(truncation);
    const auto primes = primes_up_to(truncation);
    return f1(z, primes, truncation);
}

double gamma_fn(double z) {
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw domain_error("gamma_fn needs real z > 0");
    }
    if (z < 0.5) {
        return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma_fn(1.0 - z));
    }
    static constexpr double g = 7.0;
    static constexpr std::array<double, 9> coefficients = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    const double x = z - 1.0;
    double series = coefficients[0];
    for (std::size_t i = 1; i < coefficients.size(); ++i) {
        series += coefficients[i] / (x + static_cast<double>(i));
    }
    const double t = x + g + 0.5;
    // t^(x + 1/2) e^-t split in two halves to delay overflow.
    const double half_power = std::pow(t, (x + 0.5) / 2.0);
    return std::sqrt(2.0 * std::numbers::pi) * half_power * (half_power * std::exp(-t)) * series;
}

double gaussian_window(double a, double b) {
    if (std::isnan(a) || std::isnan(b) || a > b) {
        throw domain_error("gaussian_window needs a <= b");
    }
    const double s = std::numbers::sqrt2;
    if (a >= 0.0) {
        return 0.5 * (std::erfc(a / s) - std::erfc(b / s));
    }
    if (b <= 0.0) {
        return 0.5 * (std::erfc(-b / s) - std::erfc(-a / s));
    }
    return 0.5 * (std::erf(b / s) - std::erf(a / s));
}

double t_c(double c) { return std::cbrt(4.0) * c; }

double t_c_threshold() { return 1.0 / (std::cbrt(4.0) - 1.0); }

double predict_s_full(double x, double c, std::uint64_t truncation) {
    if (!(c > 0.0 && c < 1.0)) {
        throw domain_error("predictors need c in (0, 1)");
    }
    if (!(x >= 3.0)) {
        throw domain_error("predictors need x >= 3");
    }
    const double f = f1(c, truncation).value;
    return six_over_pi_squared * f / (c * gamma_fn(c)) * x * std::pow(std::log(x), c);
}

double predict_s_small(double x, int k, double c, std::uint64_t truncation) {
    if (k < 2) {
        throw config_error("k must be at least 2");
    }
    return predict_s_full(x, c, truncation) / std::pow(static_cast<double>(k), c);
}

double predict_s_full_via_f0(double x, double c, std::uint64_t truncation) {
    if (!(c > 0.0 && c < 1.0)) {
        throw domain_error("predictors need c in (0, 1)");
    }
    if (!(x >= 3.0)) {
        throw domain_error("predictors need x >= 3");
    }
    const double f = f0(1.0 + c, truncation).value;
    return f / gamma_fn(1.0 + c) * x * std::pow(std::log(x), c);
}

double selberg_exact(std::uint64_t x, double z, bool weighted, const SieveTables& tables,
                     Threads threads) {
    if (x > tables.limit()) {
        throw range_error("x = " + std::to_string(x) + " exceeds the sieve limit");
    }
    if (!(z > 0.0) || !std::isfinite(z)) {
        throw domain_error("selberg sums need real z > 0");
    }
    if (!weighted) {
        const OmegaCounts counts = omega_class_counts(x, tables, threads);
        CompensatedSum sum;
        for (std::size_t j = 0; j < counts.size(); ++j) {
            sum.add(static_cast<double>(counts[j]) * std::pow(z, static_cast<double>(j)));
        }
        return sum.value();
    }
    const auto mu = tables.mu_table();
    const CompensatedSum total = reduce_chunks<CompensatedSum>(
        make_chunks(1, x + 1, 1 << 18), threads, CompensatedSum{},
        [&](IndexRange r) {
            CompensatedSum part;
            for (std::uint64_t n = r.begin; n < r.end; ++n) {
                if (mu[n] == 0) {
                    continue;
                }
                double term = 1.0;
                for (const auto p : tables.factor(n)) {
                    term *= z * static_cast<double>(p) / (static_cast<double>(p) + 1.0);
                }
                part.add(term);
            }
            return part;
        },
        [](CompensatedSum& acc, const CompensatedSum& part) { acc.add(part); });
    return total.value();
}

double selberg_predictor(double x, double z, bool weighted, std::uint64_t truncation) {
    if (!(x > 1.0)) {
        throw domain_error("selberg predictor needs x > 1");
    }
    const double f = weighted ? f1(z, truncation).value : f0(z, truncation).value;
    return x * std::pow(std::log(x), z - 1.0) * f / gamma_fn(z);
}

}  // namespace smalldiv

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "smalldiv/parallel.hpp"
#include "smalldiv/sieve.hpp"
#include "smalldiv/weights.hpp"

namespace smalldiv {

enum class Verdict { pass, fail, informational };

std::string_view to_string(Verdict v);

/// Result of one experiment: a grid, the observation at each grid point,
/// a tabular per-point breakdown and a verdict.
struct TrendReport {
    std::string experiment;
    std::vector<double> grid;      // strictly increasing
    std::vector<double> observed;  // one per grid point
    std::optional<double> target;  // numeric target, when there is one
    std::string target_text = "drift-to-1";  // shown when target is empty
    Verdict verdict = Verdict::informational;
    std::string notes;

    std::vector<std::string> columns;         // per-point table header
    std::vector<std::vector<double>> rows;    // one row per grid point
    std::vector<std::pair<std::string, double>> summary;

    double summary_value(std::string_view key) const;
};

/// Tolerances used by the verdicts.
namespace tolerance {
inline constexpr double ratio_window = 0.15;         // relative to k^-c
inline constexpr double prop32_constant = 6.0;
inline constexpr double scan_cross_check = 1e-12;    // relative
inline constexpr double selberg_low = 0.8;
inline constexpr double selberg_high = 1.2;
inline constexpr double erdos_kac = 0.15;
inline constexpr double erdos_kac_min_x = 1e7;
}  // namespace tolerance

/// Ratio R_{k,x} at each x against its limit k^-c. Needs at least 4 points.
TrendReport ratio_convergence(int k, double c, const std::vector<std::uint64_t>& x_grid,
                              const SieveTables& tables, bool strict = true,
                              Threads threads = {});

/// R_{k,x} with h(p) = v for each v, cross-checked against (Av + B)/(Cv + D).
TrendReport monotonicity_scan(std::uint64_t x, int k, double c, std::uint32_t p,
                              const std::vector<double>& v_grid, const SieveTables& tables,
                              bool strict = true, Threads threads = {});

/// max over squarefree m <= m_max of
/// |#{n <= x squarefree, gcd(n, m) = 1} - (6/pi^2) g(m) x| / (tau(m)^{2/3} sqrt x)
/// for each x in the grid.
TrendReport prop32_scan(std::uint64_t m_max, const std::vector<std::uint64_t>& x_grid,
                        const SieveTables& tables, Threads threads = {});

struct EBoundScan {
    std::uint64_t m_max = 0;
    std::uint64_t checked = 0;
    std::uint64_t violations = 0;
    double max_ratio = 0.0;  // max of E(m) / (2 tau(m)^{2/3})
    std::uint64_t argmax = 1;
};

/// Checks E(m) < 2 tau(m)^{2/3} for every squarefree m <= m_max.
EBoundScan e_bound_scan(std::uint64_t m_max, const SieveTables& tables);

enum class GammaFunction { log_shift, h_table };

std::string_view to_string(GammaFunction f);

/// gamma_N(x) = f(x) f(N/x) sampled at `sample_points` geometric points strictly
/// inside (sqrt N, N). f is log(e + x), or the piecewise-linear interpolation
/// of j -> H(j, w, p) through the integers.
TrendReport gamma_lemma_check(std::uint64_t big_n, GammaFunction f, std::size_t sample_points,
                              const SieveTables& tables, const PrimeWeight& w = PrimeWeight(0.3),
                              std::uint32_t p = 2);

/// Fraction of 3 <= n <= x with (omega(n) - loglog n) / sqrt(loglog n) in [a, b],
/// reported at every power of ten below x and at x itself.
TrendReport erdos_kac_histogram(std::uint64_t x, double a, double b, const SieveTables& tables);

/// Exact Selberg sum divided by its main-term predictor at each x.
TrendReport selberg_trend(double z, bool weighted, const std::vector<std::uint64_t>& x_grid,
                          const SieveTables& tables, Threads threads = {});

}  // namespace smalldiv

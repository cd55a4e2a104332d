#include "smalldiv/divisor_sums.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <string>

#include "smalldiv/compensated_sum.hpp"
#include "smalldiv/error.hpp"

namespace smalldiv {

namespace {

constexpr std::uint64_t kNChunk = 1 << 18;
constexpr std::uint64_t kDChunk = 1 << 12;
// Integers up to 2^31 have at most 10 distinct primes.
constexpr std::size_t kMaxSubsets = 1u << 10;

void check_x(std::uint64_t x, const SieveTables& tables) {
    if (x > tables.limit()) {
        throw range_error("x = " + std::to_string(x) + " exceeds the sieve limit " +
                          std::to_string(tables.limit()));
    }
}

void check_k(int k) {
    if (k < 2) {
        throw config_error("k must be at least 2");
    }
}

void check_flags(const std::vector<std::uint32_t>& flag_primes, const SieveTables& tables) {
    for (const auto p : flag_primes) {
        if (p > tables.limit()) {
            throw range_error("override prime " + std::to_string(p) +
                              " exceeds the sieve limit");
        }
    }
}

PrimeFactors squarefree_factors(std::uint64_t n, const SieveTables& tables) {
    if (!tables.is_squarefree(n)) {
        throw domain_error(std::to_string(n) + " is not squarefree");
    }
    return tables.factor(n);
}

/// Flag mask of a squarefree integer with the given distinct primes.
unsigned mask_of(const PrimeFactors& primes, const ClassCounts& proto) {
    unsigned mask = 0;
    for (const auto p : primes) {
        mask |= proto.flag_bit(p);
    }
    return mask;
}

/// Number of squarefree values in sorted `list` lying in [lo, hi] and coprime
/// to every prime in `primes`.
std::uint64_t count_coprime_in(std::span<const std::uint32_t> list, std::uint64_t lo,
                               std::uint64_t hi, const PrimeFactors& primes) {
    if (lo > hi) {
        return 0;
    }
    auto first = std::lower_bound(list.begin(), list.end(), lo);
    std::uint64_t count = 0;
    for (auto it = first; it != list.end() && *it <= hi; ++it) {
        if (!primes.divides_any(*it)) {
            ++count;
        }
    }
    return count;
}

/// Shared d-major kernel. For every squarefree e in `outer` accepted by
/// `keep(e)`, adds to class(e) the number of squarefree j in
/// [lo(e), hi(e)] coprime to e * extra_prime (extra_prime == 1 adds nothing).
template <typename Keep, typename Lo, typename Hi>
ClassCounts cofactor_classes(std::span<const std::uint32_t> outer,
                             std::span<const std::uint32_t> cofactors, std::uint32_t extra_prime,
                             const std::vector<std::uint32_t>& flag_primes,
                             const SieveTables& tables, Threads threads, Keep keep, Lo lo, Hi hi) {
    const ClassCounts proto(flag_primes);
    return reduce_chunks<ClassCounts>(
        make_chunks(0, outer.size(), kDChunk), threads, proto,
        [&](IndexRange r) {
            ClassCounts part(flag_primes);
            for (std::uint64_t i = r.begin; i < r.end; ++i) {
                const std::uint64_t e = outer[i];
                if (!keep(e)) {
                    continue;
                }
                const PrimeFactors own = tables.factor(e);
                PrimeFactors coprime_to = own;
                if (extra_prime != 1) {
                    coprime_to.push_back(extra_prime);
                }
                const std::uint64_t n =
                    count_coprime_in(cofactors, lo(e), hi(e), coprime_to);
                if (n != 0) {
                    part.add(static_cast<int>(own.size()), mask_of(own, part), n);
                }
            }
            return part;
        },
        [](ClassCounts& acc, const ClassCounts& part) { acc.merge(part); });
}

// n-major kernels: every squarefree n contributes each of its 2^omega(n)
// divisors (or just the small ones) to the divisor's class.

ClassCounts full_n_major(std::uint64_t x, const std::vector<std::uint32_t>& flag_primes,
                         const SieveTables& tables, Threads threads) {
    const auto mu = tables.mu_table();
    const ClassCounts proto(flag_primes);
    return reduce_chunks<ClassCounts>(
        make_chunks(1, x + 1, kNChunk), threads, proto,
        [&](IndexRange r) {
            ClassCounts part(flag_primes);
            std::array<unsigned, kMaxSubsets> mask{};
            for (std::uint64_t n = r.begin; n < r.end; ++n) {
                if (mu[n] == 0) {
                    continue;
                }
                const PrimeFactors primes = tables.factor(n);
                const unsigned w = static_cast<unsigned>(primes.size());
                std::array<unsigned, PrimeFactors::capacity> bit{};
                for (unsigned i = 0; i < w; ++i) {
                    bit[i] = part.flag_bit(primes[i]);
                }
                mask[0] = 0;
                part.add(0, 0, 1);
                for (unsigned s = 1; s < (1u << w); ++s) {
                    mask[s] = mask[s & (s - 1)] | bit[std::countr_zero(s)];
                    part.add(std::popcount(s), mask[s], 1);
                }
            }
            return part;
        },
        [](ClassCounts& acc, const ClassCounts& part) { acc.merge(part); });
}

ClassCounts small_n_major(std::uint64_t x, int k, const std::vector<std::uint32_t>& flag_primes,
                          const SieveTables& tables, Threads threads) {
    const auto mu = tables.mu_table();
    const ClassCounts proto(flag_primes);
    return reduce_chunks<ClassCounts>(
        make_chunks(1, x + 1, kNChunk), threads, proto,
        [&](IndexRange r) {
            ClassCounts part(flag_primes);
            std::array<unsigned, kMaxSubsets> mask{};
            std::array<std::uint64_t, kMaxSubsets> divisor{};
            for (std::uint64_t n = r.begin; n < r.end; ++n) {
                if (mu[n] == 0) {
                    continue;
                }
                const std::uint64_t root = integer_kth_root(n, static_cast<unsigned>(k));
                const PrimeFactors primes = tables.factor(n);
                const unsigned w = static_cast<unsigned>(primes.size());
                std::array<unsigned, PrimeFactors::capacity> bit{};
                for (unsigned i = 0; i < w; ++i) {
                    bit[i] = part.flag_bit(primes[i]);
                }
                mask[0] = 0;
                divisor[0] = 1;
                part.add(0, 0, 1);
                for (unsigned s = 1; s < (1u << w); ++s) {
                    const unsigned low = static_cast<unsigned>(std::countr_zero(s));
                    divisor[s] = divisor[s & (s - 1)] * primes[low];
                    mask[s] = mask[s & (s - 1)] | bit[low];
                    if (divisor[s] <= root) {
                        part.add(std::popcount(s), mask[s], 1);
                    }
                }
            }
            return part;
        },
        [](ClassCounts& acc, const ClassCounts& part) { acc.merge(part); });
}

std::uint64_t binomial(unsigned n, unsigned r) {
    std::uint64_t value = 1;
    for (unsigned i = 1; i <= r; ++i) {
        value = value * (n - r + i) / i;
    }
    return value;
}

}  // namespace

std::string_view to_string(FullMethod m) {
    switch (m) {
        case FullMethod::n_major: return "n_major";
        case FullMethod::d_major: return "d_major";
        case FullMethod::omega_identity: return "omega_identity";
    }
    return "unknown";
}

std::string_view to_string(SmallMethod m) {
    switch (m) {
        case SmallMethod::n_major: return "n_major";
        case SmallMethod::d_major: return "d_major";
    }
    return "unknown";
}

double full_divisor_sum(std::uint64_t n, const PrimeWeight& w, const SieveTables& tables) {
    const PrimeFactors primes = squarefree_factors(n, tables);
    // Subset expansion of prod (1 + h(p)).
    std::vector<double> terms{1.0};
    for (const auto p : primes) {
        const double hp = w.at_prime(p);
        const std::size_t half = terms.size();
        for (std::size_t i = 0; i < half; ++i) {
            terms.push_back(terms[i] * hp);
        }
    }
    CompensatedSum sum;
    for (const double t : terms) {
        sum.add(t);
    }
    return sum.value();
}

double small_divisor_sum(std::uint64_t n, int k, const PrimeWeight& w,
                         const SieveTables& tables) {
    check_k(k);
    const PrimeFactors primes = squarefree_factors(n, tables);
    const std::uint64_t root = integer_kth_root(n, static_cast<unsigned>(k));
    const unsigned count = static_cast<unsigned>(primes.size());
    CompensatedSum sum;
    for (unsigned s = 0; s < (1u << count); ++s) {
        std::uint64_t d = 1;
        double hd = 1.0;
        for (unsigned i = 0; i < count; ++i) {
            if (s & (1u << i)) {
                d *= primes[i];
                hd *= w.at_prime(primes[i]);
            }
        }
        if (d <= root) {
            sum.add(hd);
        }
    }
    return sum.value();
}

ClassCounts full_class_counts(std::uint64_t x, const std::vector<std::uint32_t>& flag_primes,
                              const SieveTables& tables, FullMethod method, Threads threads) {
    check_x(x, tables);
    check_flags(flag_primes, tables);
    switch (method) {
        case FullMethod::n_major:
            return full_n_major(x, flag_primes, tables, threads);
        case FullMethod::d_major: {
            const auto list = tables.squarefree_up_to(x);
            return cofactor_classes(
                list, list, 1, flag_primes, tables, threads,
                [](std::uint64_t) { return true; },
                [](std::uint64_t) -> std::uint64_t { return 1; },
                [x](std::uint64_t d) { return x / d; });
        }
        case FullMethod::omega_identity: {
            if (!flag_primes.empty()) {
                throw config_error("omega_identity applies only to override-free weights");
            }
            // A squarefree n with omega(n) = w has binom(w, j) divisors with j primes.
            const OmegaCounts counts = omega_class_counts(x, tables, threads);
            ClassCounts out;
            for (unsigned w = 0; w < counts.size(); ++w) {
                for (unsigned j = 0; j <= w; ++j) {
                    out.add(static_cast<int>(j), 0, counts[w] * binomial(w, j));
                }
            }
            return out;
        }
    }
    throw config_error("unknown method");
}

ClassCounts small_class_counts(std::uint64_t x, int k,
                               const std::vector<std::uint32_t>& flag_primes,
                               const SieveTables& tables, SmallMethod method, Threads threads) {
    check_x(x, tables);
    check_k(k);
    check_flags(flag_primes, tables);
    switch (method) {
        case SmallMethod::n_major:
            return small_n_major(x, k, flag_primes, tables, threads);
        case SmallMethod::d_major: {
            const auto uk = static_cast<unsigned>(k);
            const std::uint64_t root = integer_kth_root(x, uk);
            const auto outer = tables.squarefree_up_to(root);
            const auto list = tables.squarefree_up_to(x);
            return cofactor_classes(
                outer, list, 1, flag_primes, tables, threads,
                [](std::uint64_t) { return true; },
                [uk](std::uint64_t d) { return saturating_pow(d, uk - 1); },
                [x](std::uint64_t d) { return x / d; });
        }
    }
    throw config_error("unknown method");
}

SumResult s_full(std::uint64_t x, const PrimeWeight& w, const SieveTables& tables,
                 FullMethod method, Threads threads) {
    w.check_against(tables);
    SumResult out{full_class_counts(x, w.override_primes(), tables, method, threads), 0.0};
    if (method == FullMethod::omega_identity) {
        // Real value straight from sum_n (1 + c)^omega(n).
        const OmegaCounts counts = omega_class_counts(x, tables, threads);
        CompensatedSum sum;
        for (std::size_t j = 0; j < counts.size(); ++j) {
            sum.add(static_cast<double>(counts[j]) *
                    std::pow(1.0 + w.base_c(), static_cast<double>(j)));
        }
        out.value = sum.value();
    } else {
        out.value = out.classes.evaluate(w);
    }
    return out;
}

SumResult s_small(std::uint64_t x, int k, const PrimeWeight& w, const SieveTables& tables,
                  SmallMethod method, Threads threads) {
    w.check_against(tables);
    SumResult out{small_class_counts(x, k, w.override_primes(), tables, method, threads), 0.0};
    out.value = out.classes.evaluate(w);
    return out;
}

RatioReport ratio(std::uint64_t x, int k, const PrimeWeight& w, const SieveTables& tables,
                  Threads threads) {
    RatioReport report;
    report.x = x;
    report.k = k;
    report.weight = w;
    report.s_full = s_full(x, w, tables, FullMethod::n_major, threads).value;
    report.s_small = s_small(x, k, w, tables, SmallMethod::n_major, threads).value;
    report.ratio = x == 0 ? 1.0 : report.s_small / report.s_full;
    report.predicted_limit = std::pow(static_cast<double>(k), -w.base_c());
    return report;
}

std::vector<double> h_series_prefix(std::uint64_t x, const PrimeWeight& w, std::uint32_t p,
                                    const SieveTables& tables) {
    check_x(x, tables);
    if (!tables.is_prime(p)) {
        throw domain_error(std::to_string(p) + " is not prime");
    }
    const auto mu = tables.mu_table();
    std::vector<double> prefix(x + 1, 0.0);
    CompensatedSum sum;
    for (std::uint64_t j = 1; j <= x; ++j) {
        if (mu[j] != 0 && j % p != 0) {
            double term = 1.0 / static_cast<double>(j);
            for (const auto q : tables.factor(j)) {
                term *= w.at_prime(q) * (static_cast<double>(q) / (static_cast<double>(q) + 1.0));
            }
            sum.add(term);
        }
        prefix[j] = sum.value();
    }
    return prefix;
}

double h_series(std::uint64_t x, const PrimeWeight& w, std::uint32_t p,
                const SieveTables& tables) {
    if (x == 0) {
        return 0.0;
    }
    return h_series_prefix(x, w, p, tables).back();
}

AbcdResult abcd(std::uint64_t x, int k, const PrimeWeight& w, std::uint32_t p,
                const SieveTables& tables, Threads threads) {
    check_x(x, tables);
    check_k(k);
    w.check_against(tables);
    if (p > tables.limit()) {
        throw range_error("prime " + std::to_string(p) + " exceeds the sieve limit");
    }
    if (!tables.is_prime(p)) {
        throw domain_error(std::to_string(p) + " is not prime");
    }

    std::vector<std::uint32_t> others;
    for (const auto q : w.override_primes()) {
        if (q != p) {
            others.push_back(q);
        }
    }
    const auto uk = static_cast<unsigned>(k);
    const std::uint64_t root = integer_kth_root(x, uk);
    const auto list = tables.squarefree_up_to(x);
    auto not_multiple = [p](std::uint64_t e) { return e % p != 0; };
    auto upto = [&list](std::uint64_t bound) {
        return std::span<const std::uint32_t>(
            list.data(), static_cast<std::size_t>(
                             std::upper_bound(list.begin(), list.end(), bound) - list.begin()));
    };

    AbcdResult out;
    out.p = p;
    out.h_p = w.at_prime(p);
    // A: m <= x^(1/k)/p, p !| m;  n = m p j with (mp)^(k-1) <= j <= x/(mp).
    out.a_classes = cofactor_classes(
        upto(root / p), list, p, others, tables, threads, not_multiple,
        [p, uk](std::uint64_t m) { return saturating_pow(m * p, uk - 1); },
        [x, p](std::uint64_t m) { return x / (m * p); });
    // B: d <= x^(1/k), p !| d;  d^(k-1) <= j <= x/d.
    out.b_classes = cofactor_classes(
        upto(root), list, 1, others, tables, threads, not_multiple,
        [uk](std::uint64_t d) { return saturating_pow(d, uk - 1); },
        [x](std::uint64_t d) { return x / d; });
    // C: m <= x/p, p !| m;  j <= x/(mp).
    out.c_classes = cofactor_classes(
        upto(x / p), list, p, others, tables, threads, not_multiple,
        [](std::uint64_t) -> std::uint64_t { return 1; },
        [x, p](std::uint64_t m) { return x / (m * p); });
    // D: d <= x, p !| d;  j <= x/d.
    out.d_classes = cofactor_classes(
        upto(x), list, 1, others, tables, threads, not_multiple,
        [](std::uint64_t) -> std::uint64_t { return 1; },
        [x](std::uint64_t d) { return x / d; });

    out.a = out.a_classes.evaluate(w);
    out.b = out.b_classes.evaluate(w);
    out.c = out.c_classes.evaluate(w);
    out.d = out.d_classes.evaluate(w);

    // Independent n-major route over the tracked primes plus p.
    std::vector<std::uint32_t> with_p = others;
    with_p.insert(std::upper_bound(with_p.begin(), with_p.end(), p), p);
    const ClassCounts small = small_class_counts(x, k, with_p, tables, SmallMethod::n_major,
                                                 threads);
    const ClassCounts full = full_class_counts(x, with_p, tables, FullMethod::n_major, threads);
    out.s_small = small.evaluate(w);
    out.s_full = full.evaluate(w);

    ClassCounts small_split = out.a_classes.lift_by_prime(p);
    small_split.merge(out.b_classes.widen(with_p));
    ClassCounts full_split = out.c_classes.lift_by_prime(p);
    full_split.merge(out.d_classes.widen(with_p));
    out.small_identity_exact = small_split == small;
    out.full_identity_exact = full_split == full;
    return out;
}

}  // namespace smalldiv

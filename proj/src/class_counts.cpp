#include "smalldiv/class_counts.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "smalldiv/compensated_sum.hpp"
#include "smalldiv/error.hpp"

namespace smalldiv {

ClassCounts::ClassCounts(std::vector<std::uint32_t> flag_primes)
    : flag_primes_(std::move(flag_primes)) {
    if (flag_primes_.size() > max_flag_primes) {
        throw config_error("at most " + std::to_string(max_flag_primes) +
                           " overridden primes are supported");
    }
    if (!std::is_sorted(flag_primes_.begin(), flag_primes_.end()) ||
        std::adjacent_find(flag_primes_.begin(), flag_primes_.end()) != flag_primes_.end()) {
        throw config_error("flag primes must be strictly ascending");
    }
    counts_.assign(static_cast<std::size_t>(num_masks()) * omega_slots, 0);
}

std::size_t ClassCounts::index(int omega, unsigned flags) const {
    if (omega < 0 || omega >= omega_slots || flags >= num_masks()) {
        throw range_error("class key out of range");
    }
    return static_cast<std::size_t>(flags) * omega_slots + static_cast<std::size_t>(omega);
}

void ClassCounts::merge(const ClassCounts& other) {
    if (other.flag_primes_ != flag_primes_) {
        throw config_error("cannot merge class counts over different flag primes");
    }
    for (std::size_t i = 0; i < counts_.size(); ++i) {
        counts_[i] += other.counts_[i];
    }
}

std::uint64_t ClassCounts::total() const noexcept {
    std::uint64_t sum = 0;
    for (const auto c : counts_) {
        sum += c;
    }
    return sum;
}

double ClassCounts::evaluate(const PrimeWeight& w) const {
    std::vector<double> flagged(flag_primes_.size());
    for (std::size_t i = 0; i < flag_primes_.size(); ++i) {
        flagged[i] = w.at_prime(flag_primes_[i]);
    }
    const double c = w.base_c();
    CompensatedSum sum;
    for_each([&](int omega, unsigned flags, std::uint64_t count) {
        // Repeated multiplication, so 0^0 = 1 and equal factors give equal
        // products no matter which of them are flagged.
        double weight = 1.0;
        for (int i = std::popcount(flags); i < omega; ++i) {
            weight *= c;
        }
        for (std::size_t i = 0; i < flagged.size(); ++i) {
            if (flags & (1u << i)) {
                weight *= flagged[i];
            }
        }
        sum.add(static_cast<double>(count) * weight);
    });
    return sum.value();
}

ClassCounts ClassCounts::widen(const std::vector<std::uint32_t>& superset) const {
    ClassCounts out(superset);
    std::vector<unsigned> remap(flag_primes_.size());
    for (std::size_t i = 0; i < flag_primes_.size(); ++i) {
        remap[i] = out.flag_bit(flag_primes_[i]);
        if (remap[i] == 0) {
            throw config_error("widen target is not a superset of the flag primes");
        }
    }
    for_each([&](int omega, unsigned flags, std::uint64_t count) {
        unsigned mapped = 0;
        for (std::size_t i = 0; i < remap.size(); ++i) {
            if (flags & (1u << i)) {
                mapped |= remap[i];
            }
        }
        out.add(omega, mapped, count);
    });
    return out;
}

ClassCounts ClassCounts::lift_by_prime(std::uint32_t p) const {
    if (flag_bit(p) != 0) {
        throw config_error("lift prime is already tracked");
    }
    std::vector<std::uint32_t> superset = flag_primes_;
    superset.insert(std::upper_bound(superset.begin(), superset.end(), p), p);
    ClassCounts widened = widen(superset);
    ClassCounts out(superset);
    const unsigned bit = out.flag_bit(p);
    widened.for_each([&](int omega, unsigned flags, std::uint64_t count) {
        out.add(omega + 1, flags | bit, count);
    });
    return out;
}

}  // namespace smalldiv

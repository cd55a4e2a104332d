#pragma once

#include <cmath>

namespace smalldiv {

// Neumaier's variant of Kahan summation. The result depends on the order
// of add() calls, so callers fix that order to stay reproducible.
class CompensatedSum {
public:
    CompensatedSum() = default;
    explicit CompensatedSum(double initial) : sum_(initial) {}

    void add(double value) noexcept {
        const double t = sum_ + value;
        if (std::fabs(sum_) >= std::fabs(value)) {
            compensation_ += (sum_ - t) + value;
        } else {
            compensation_ += (value - t) + sum_;
        }
        sum_ = t;
    }

    void add(const CompensatedSum& other) noexcept {
        add(other.sum_);
        add(other.compensation_);
    }

    CompensatedSum& operator+=(double value) noexcept {
        add(value);
        return *this;
    }

    double value() const noexcept { return sum_ + compensation_; }

private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

}  // namespace smalldiv

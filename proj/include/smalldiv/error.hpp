#pragma once

#include <stdexcept>
#include <string>

namespace smalldiv {

// Invalid user configuration (limits, flags, weight parameters).
class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation
// (non-squarefree input, composite where a prime is needed, c = 0 pole).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Argument outside the computable range (table extent, overflow, budgets).
class range_error : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

}  // namespace smalldiv

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polyclone {

// Caller passed arguments outside an operation's contract.
class UsageError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed the configured budget. Callers are expected
// to fall back to a sampled strategy.
class BudgetExceeded : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Certificate construction found a fact that does not hold.
class CertificateError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Enumeration caps. POLYCLONE_BUDGET, when set, overrides every cap.
struct Budget
{
    std::uint64_t max_enumeration = 100'000'000;
    std::uint64_t max_variables = 20'000;

    static auto from_environment() -> Budget;
};

} // namespace polyclone

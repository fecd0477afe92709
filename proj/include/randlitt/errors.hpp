#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace randlitt {

/// Raised when an argument lies outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a requested computation would exceed the configured work budget.
/// Carries the budget that would be needed so callers can raise it deliberately.
class BudgetExceeded : public std::runtime_error {
public:
    BudgetExceeded(const std::string& what, double required, double budget)
        : std::runtime_error(what), required_(required), budget_(budget) {}

    double required() const noexcept { return required_; }
    double budget() const noexcept { return budget_; }

private:
    double required_;
    double budget_;
};

/// Default cap on point-region membership tests (and statistic evaluations).
inline constexpr double kDefaultBudget = 1e10;

} // namespace randlitt

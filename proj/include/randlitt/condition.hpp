#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "randlitt/psi.hpp"

namespace randlitt {

/// x log(1/x), extended by 0 at x = 0. Negative for x > 1.
double xlog_inv(double x);

struct ConditionRow {
    std::uint64_t n = 0;
    double partial_sum = 0.0; ///< S_n = sum_{m<=n} psi(m) log(1/psi(m))
    double log_u = 0.0;       ///< -(4+eps) log n + (4-eps) S_n
    bool is_record = false;   ///< log_u >= every earlier log_u
};

/// The divergence-condition sequence u_n, kept in log domain, and its
/// prefix-maximum ("record") set.
struct ConditionTrace {
    double epsilon = 0.0;
    std::vector<ConditionRow> rows; ///< rows[i].n == i + 1

    const ConditionRow& at(std::uint64_t n) const { return rows.at(n - 1); }
    std::vector<std::uint64_t> records() const;
    /// Columns: n, S_n, log_u_n, is_record.
    void write_csv(std::ostream& out) const;
};

ConditionTrace condition_trace(const PsiSpec& psi, double epsilon, std::uint64_t n_max);

/// Open interval (lower, upper).
struct Interval {
    double lower = 0.0;
    double upper = 0.0;
    bool empty() const { return !(lower < upper); }
};

/// Epsilons for which (4 - eps)(1 + delta) > 4 + eps, i.e. (0, 4 delta / (2 + delta)).
Interval epsilon_feasible(double delta);

/// (4 - eps)(1 + delta) - (4 + eps): the limiting slope of log u_n against
/// log n for the paper family.
double asymptotic_slope(double delta, double epsilon);

/// (4 - eps) n psi(n) log(1/psi(n)) - (4 + eps): the instantaneous slope of
/// log u_n against log n, including the slowly decaying finite-n terms.
double local_slope(const PsiSpec& psi, double epsilon, std::uint64_t n);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::uint64_t points = 0;
};

/// Least-squares line log_u = intercept + slope log n over n in [n_lo, n_hi].
SlopeFit fit_log_u_slope(const ConditionTrace& trace, std::uint64_t n_lo, std::uint64_t n_hi);

struct EqfastEntry {
    std::uint64_t n = 0;
    double psi = 0.0;
    double bound = 0.0; ///< (1 + eps/4) / (n log n)
    bool holds = false;
};

struct EqfastReport {
    std::vector<EqfastEntry> entries; ///< one per record index n >= 3
    /// Largest record index violating the bound: the measured "sufficiently
    /// large" threshold. Empty if no record violates it.
    std::optional<std::uint64_t> largest_violation;
};

EqfastReport eqfast_check(const ConditionTrace& trace, const PsiSpec& psi);

struct FailureBound {
    /// log( n^(4+eps) prod_{m} (1 - lambda(B_m^(n))) ); -inf if a factor vanishes.
    double log_product_form = 0.0;
    /// log( n^(4+eps) exp(-(4-eps) sum_m psi(m) log(1/psi(m))) ).
    double log_exp_form = 0.0;
};

/// Both forms of the failure-measure bound, in log domain. Products and sums
/// run over m = m_min..n; m_min > 1 leaves out leading indices (for instance
/// those with psi(m) >= 1/4, whose regions cover the torus outright).
FailureBound failure_bound(std::uint64_t n, const PsiSpec& psi, double epsilon,
                           std::uint64_t shrink_ambient = 0, std::uint64_t m_min = 1);

} // namespace randlitt

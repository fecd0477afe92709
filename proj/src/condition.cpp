#include "randlitt/condition.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "randlitt/errors.hpp"
#include "randlitt/region.hpp"

namespace randlitt {

namespace {

// Neumaier compensated accumulator.
class CompensatedSum {
public:
    void add(double x)
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            carry_ += (sum_ - t) + x;
        else
            carry_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

void require_positive_epsilon(double epsilon)
{
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw DomainError("epsilon must be > 0");
}

} // namespace

double xlog_inv(double x)
{
    if (x == 0.0) return 0.0;
    return -x * std::log(x);
}

std::vector<std::uint64_t> ConditionTrace::records() const
{
    std::vector<std::uint64_t> out;
    for (const auto& r : rows)
        if (r.is_record) out.push_back(r.n);
    return out;
}

void ConditionTrace::write_csv(std::ostream& out) const
{
    out << "n,S_n,log_u_n,is_record\n";
    for (const auto& r : rows)
        out << fmt::format("{},{:.17g},{:.17g},{}\n", r.n, r.partial_sum, r.log_u,
                           r.is_record ? 1 : 0);
}

ConditionTrace condition_trace(const PsiSpec& psi, double epsilon, std::uint64_t n_max)
{
    require_positive_epsilon(epsilon);
    if (n_max < 1) throw DomainError("condition_trace requires N_max >= 1");
    ConditionTrace trace;
    trace.epsilon = epsilon;
    trace.rows.reserve(n_max);
    CompensatedSum sum;
    double best = -std::numeric_limits<double>::infinity();
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        sum.add(xlog_inv(psi(n)));
        ConditionRow row;
        row.n = n;
        row.partial_sum = sum.value();
        row.log_u = -(4.0 + epsilon) * std::log(static_cast<double>(n)) +
                    (4.0 - epsilon) * row.partial_sum;
        row.is_record = row.log_u >= best;
        if (row.is_record) best = row.log_u;
        trace.rows.push_back(row);
    }
    return trace;
}

Interval epsilon_feasible(double delta)
{
    if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be > 0");
    return {0.0, 4.0 * delta / (2.0 + delta)};
}

double asymptotic_slope(double delta, double epsilon)
{
    return (4.0 - epsilon) * (1.0 + delta) - (4.0 + epsilon);
}

double local_slope(const PsiSpec& psi, double epsilon, std::uint64_t n)
{
    return (4.0 - epsilon) * static_cast<double>(n) * xlog_inv(psi(n)) - (4.0 + epsilon);
}

SlopeFit fit_log_u_slope(const ConditionTrace& trace, std::uint64_t n_lo, std::uint64_t n_hi)
{
    if (n_lo < 1 || n_hi <= n_lo || n_hi > trace.rows.size())
        throw DomainError("slope fit range must satisfy 1 <= n_lo < n_hi <= N_max");
    const auto count = static_cast<Eigen::Index>(n_hi - n_lo + 1);
    Eigen::MatrixXd design(count, 2);
    Eigen::VectorXd target(count);
    for (Eigen::Index i = 0; i < count; ++i) {
        const auto n = n_lo + static_cast<std::uint64_t>(i);
        design(i, 0) = 1.0;
        design(i, 1) = std::log(static_cast<double>(n));
        target(i) = trace.at(n).log_u;
    }
    const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(target);
    return {coef(1), coef(0), static_cast<std::uint64_t>(count)};
}

EqfastReport eqfast_check(const ConditionTrace& trace, const PsiSpec& psi)
{
    EqfastReport report;
    for (const auto& row : trace.rows) {
        if (!row.is_record || row.n < 3) continue;
        const double nn = static_cast<double>(row.n);
        EqfastEntry e;
        e.n = row.n;
        e.psi = psi(row.n);
        e.bound = (1.0 + trace.epsilon / 4.0) / (nn * std::log(nn));
        e.holds = e.psi >= e.bound;
        if (!e.holds) report.largest_violation = row.n;
        report.entries.push_back(e);
    }
    return report;
}

FailureBound failure_bound(std::uint64_t n, const PsiSpec& psi, double epsilon,
                           std::uint64_t shrink_ambient, std::uint64_t m_min)
{
    if (n < 2) throw DomainError("failure_bound requires n >= 2");
    require_positive_epsilon(epsilon);
    if (m_min < 1) throw DomainError("m_min must be >= 1");
    const std::uint64_t ambient = shrink_ambient == 0 ? n : shrink_ambient;
    const double shrink = shrink_amount(ambient);
    const double prefactor = (4.0 + epsilon) * std::log(static_cast<double>(n));

    CompensatedSum log_product;
    CompensatedSum partial;
    bool vanished = false;
    for (std::uint64_t m = m_min; m <= n; ++m) {
        const double value = psi(m);
        partial.add(xlog_inv(value));
        if (vanished) continue;
        const double shrunk = value - shrink;
        const double area = shrunk <= 0.0 ? 0.0 : region_area_exact(shrunk);
        if (area >= 1.0)
            vanished = true;
        else
            log_product.add(std::log1p(-area));
    }
    FailureBound out;
    out.log_product_form = vanished ? -std::numeric_limits<double>::infinity()
                                    : prefactor + log_product.value();
    out.log_exp_form = prefactor - (4.0 - epsilon) * partial.value();
    return out;
}

} // namespace randlitt

#include "randlitt/psi.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "randlitt/errors.hpp"
#include "randlitt/parse.hpp"

namespace randlitt {


PsiSpec PsiSpec::paper(double delta)
{
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw DomainError("psi paper family requires delta > 0");
    return PsiSpec(Paper{delta});
}

PsiSpec PsiSpec::constant(double value)
{
    if (!(value >= 0.0) || !std::isfinite(value))
        throw DomainError("psi constant family requires c >= 0");
    return PsiSpec(Constant{value});
}

PsiSpec PsiSpec::custom(std::vector<double> table)
{
    if (table.empty()) throw DomainError("psi custom table is empty");
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (!(table[i] >= 0.0) || !std::isfinite(table[i]))
            throw DomainError("psi custom table values must be finite and >= 0");
        if (i > 0 && table[i] > table[i - 1])
            throw DomainError("psi custom table must be nonincreasing");
    }
    return PsiSpec(Custom{std::move(table)});
}

PsiSpec PsiSpec::parse(std::string_view text)
{
    const auto colon = text.find(':');
    if (colon == std::string_view::npos)
        throw DomainError(fmt::format("psi: expected family:params, got '{}'", text));
    const auto family = text.substr(0, colon);
    const auto params = text.substr(colon + 1);
    if (family == "paper") return paper(parse_real(params, "delta"));
    if (family == "constant") return constant(parse_real(params, "constant"));
    if (family == "custom") {
        std::vector<double> table;
        std::string_view rest = params;
        while (true) {
            const auto comma = rest.find(',');
            table.push_back(parse_real(rest.substr(0, comma), "table entry"));
            if (comma == std::string_view::npos) break;
            rest = rest.substr(comma + 1);
        }
        return custom(std::move(table));
    }
    throw DomainError(fmt::format("psi: unknown family '{}' (paper, constant, custom)", family));
}

double PsiSpec::operator()(std::uint64_t n) const
{
    if (n < 1) throw DomainError("psi is defined for n >= 1");
    if (const auto* p = std::get_if<Paper>(&family_)) {
        const double x = static_cast<double>(n);
        return (1.0 + p->delta) / (x * std::log1p(x));
    }
    if (const auto* c = std::get_if<Constant>(&family_)) return c->value;
    const auto& table = std::get<Custom>(family_).table;
    return n <= table.size() ? table[n - 1] : 0.0;
}

std::string PsiSpec::to_string() const
{
    if (const auto* p = std::get_if<Paper>(&family_)) return fmt::format("paper:{}", p->delta);
    if (const auto* c = std::get_if<Constant>(&family_))
        return fmt::format("constant:{}", c->value);
    return fmt::format("custom:{}", fmt::join(std::get<Custom>(family_).table, ","));
}

double PsiSpec::paper_delta() const
{
    if (const auto* p = std::get_if<Paper>(&family_)) return p->delta;
    return std::numeric_limits<double>::quiet_NaN();
}

std::uint64_t PsiSpec::first_partial_index(std::uint64_t limit) const
{
    for (std::uint64_t m = 1; m <= limit; ++m)
        if ((*this)(m) < 0.25) return m;
    return limit + 1;
}

} // namespace randlitt

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace randlitt {

/// A nonincreasing approximation function psi: N -> [0, inf).
///
/// Families:
///  - paper:<delta>   psi(n) = (1 + delta) / (n log(n + 1)), delta > 0
///  - constant:<c>    psi(n) = c, c >= 0
///  - custom:<v1,v2,...>  psi(n) = v_n for n <= len, 0 beyond; the table must
///    be nonincreasing and nonnegative.
class PsiSpec {
public:
    struct Paper { double delta; };
    struct Constant { double value; };
    struct Custom { std::vector<double> table; };

    static PsiSpec paper(double delta);
    static PsiSpec constant(double value);
    static PsiSpec custom(std::vector<double> table);

    /// Parses the `family:params` syntax above.
    static PsiSpec parse(std::string_view text);

    /// psi(n) for n >= 1.
    double operator()(std::uint64_t n) const;

    /// Round-trips through parse().
    std::string to_string() const;

    bool is_paper() const { return std::holds_alternative<Paper>(family_); }
    /// delta for the paper family, NaN otherwise.
    double paper_delta() const;

    /// Smallest m with psi(m) < 1/4, i.e. the first index whose region is not
    /// the whole torus. Returns `limit + 1` if none exists up to `limit`.
    std::uint64_t first_partial_index(std::uint64_t limit) const;

    const std::variant<Paper, Constant, Custom>& family() const { return family_; }

private:
    explicit PsiSpec(std::variant<Paper, Constant, Custom> f) : family_(std::move(f)) {}
    std::variant<Paper, Constant, Custom> family_;
};

} // namespace randlitt

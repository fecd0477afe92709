#include "randlitt/number.hpp"

#include <boost/multiprecision/cpp_int.hpp>

namespace randlitt {

namespace {

using boost::multiprecision::cpp_int;
using Bits = Fraction128::Bits;

void require_n_at_least_2(std::uint64_t n)
{
    if (n < 2) throw DomainError("statistic requires n >= 2 (log 1 = 0)");
}

Bits low_bits(const cpp_int& v)
{
    const cpp_int mask = (cpp_int(1) << 64) - 1;
    const auto lo = static_cast<std::uint64_t>(v & mask);
    const auto hi = static_cast<std::uint64_t>((v >> 64) & mask);
    return (static_cast<Bits>(hi) << 64) | lo;
}

cpp_int floor_cbrt(const cpp_int& v)
{
    // Newton from above: y_{k+1} = (2 y_k + v / y_k^2) / 3 decreases until floor.
    cpp_int y = cpp_int(1) << (msb(v) / 3 + 1);
    while (true) {
        cpp_int next = (2 * y + v / (y * y)) / 3;
        if (next >= y) break;
        y = next;
    }
    while (y * y * y > v) --y;
    while ((y + 1) * (y + 1) * (y + 1) <= v) ++y;
    return y;
}

} // namespace

double littlewood_statistic(std::uint64_t n, double alpha, double beta, ShiftPair shifts)
{
    require_n_at_least_2(n);
    const double nn = static_cast<double>(n);
    return nn * std::log(nn) * shifted_norm(n, alpha, shifts.gamma) *
           shifted_norm(n, beta, shifts.delta);
}

std::pair<double, double> deterministic_statistics(std::uint64_t n, double alpha, double beta)
{
    require_n_at_least_2(n);
    const double nn = static_cast<double>(n);
    const double log_n = std::log(nn);
    const double norms = shifted_norm(n, alpha, 0.0) * shifted_norm(n, beta, 0.0);
    return {nn * log_n * norms, nn * log_n * log_n * norms};
}

Fraction128 Fraction128::from_double(double x)
{
    if (!std::isfinite(x)) throw DomainError("Fraction128: non-finite input");
    if (x == 0.0) return {};
    int exp = 0;
    const double mant = std::frexp(std::abs(x), &exp);
    const auto m = static_cast<std::uint64_t>(std::ldexp(mant, 53));
    const int shift = exp - 53 + 128; // |x| * 2^128 = m * 2^shift
    Bits magnitude = 0;
    bool inexact = false;
    if (shift >= 128) {
        magnitude = 0;
    } else if (shift >= 0) {
        magnitude = static_cast<Bits>(m) << shift;
    } else if (shift > -64) {
        magnitude = static_cast<Bits>(m >> -shift);
        inexact = (m & ((std::uint64_t{1} << -shift) - 1)) != 0;
    } else {
        inexact = true;
    }
    if (x > 0) return Fraction128(magnitude);
    // floor(-v) = -ceil(v)
    return Fraction128(static_cast<Bits>(0) - (magnitude + (inexact ? 1 : 0)));
}

Fraction128 Fraction128::from_rational(std::int64_t p, std::uint64_t q)
{
    if (q == 0) throw DomainError("Fraction128: zero denominator");
    cpp_int num = cpp_int(p) << 128;
    cpp_int quotient = num / q;
    if (num < 0 && quotient * q != num) quotient -= 1; // floor toward -inf
    const cpp_int modulus = cpp_int(1) << 128;
    quotient %= modulus;
    if (quotient < 0) quotient += modulus;
    return Fraction128(low_bits(quotient));
}

double Fraction128::to_double() const
{
    return std::ldexp(static_cast<double>(bits_), -128);
}

double Fraction128::distance_to_integer() const
{
    constexpr Bits half = static_cast<Bits>(1) << 127;
    const Bits d = bits_ <= half ? bits_ : static_cast<Bits>(0) - bits_;
    return std::ldexp(static_cast<double>(d), -128);
}

double shifted_norm_high(std::uint64_t n, Fraction128 x, double shift)
{
    if (n < 1) throw DomainError("shifted_norm: n must be >= 1");
    return (n * x - Fraction128::from_double(shift)).distance_to_integer();
}

double littlewood_statistic_high(std::uint64_t n, Fraction128 alpha, Fraction128 beta,
                                 ShiftPair shifts)
{
    require_n_at_least_2(n);
    const double nn = static_cast<double>(n);
    return nn * std::log(nn) * shifted_norm_high(n, alpha, shifts.gamma) *
           shifted_norm_high(n, beta, shifts.delta);
}

std::pair<double, double> deterministic_statistics_high(std::uint64_t n, Fraction128 alpha,
                                                        Fraction128 beta)
{
    require_n_at_least_2(n);
    const double nn = static_cast<double>(n);
    const double log_n = std::log(nn);
    const double norms =
        (n * alpha).distance_to_integer() * (n * beta).distance_to_integer();
    return {nn * log_n * norms, nn * log_n * log_n * norms};
}

NamedConstant parse_named_constant(std::string_view name)
{
    if (name == "golden") return NamedConstant::Golden;
    if (name == "silver") return NamedConstant::Silver;
    if (name == "cbrt2") return NamedConstant::Cbrt2;
    throw DomainError("unknown named constant '" + std::string(name) +
                      "' (expected golden, silver or cbrt2)");
}

std::string_view to_string(NamedConstant c)
{
    switch (c) {
    case NamedConstant::Golden: return "golden";
    case NamedConstant::Silver: return "silver";
    case NamedConstant::Cbrt2: return "cbrt2";
    }
    return "?";
}

std::string_view closed_form(NamedConstant c)
{
    switch (c) {
    case NamedConstant::Golden: return "(sqrt(5)-1)/2";
    case NamedConstant::Silver: return "sqrt(2)-1";
    case NamedConstant::Cbrt2: return "cbrt(2)-1";
    }
    return "?";
}

Fraction128 named_fraction(NamedConstant c)
{
    const cpp_int one = cpp_int(1) << 128;
    switch (c) {
    case NamedConstant::Golden: {
        // floor((floor(sqrt5 * 2^128) - 2^128) / 2) == floor((sqrt5 - 1) / 2 * 2^128)
        const cpp_int root = boost::multiprecision::sqrt(cpp_int(5) << 256);
        return Fraction128::from_bits(low_bits((root - one) >> 1));
    }
    case NamedConstant::Silver: {
        const cpp_int root = boost::multiprecision::sqrt(cpp_int(2) << 256);
        return Fraction128::from_bits(low_bits(root - one));
    }
    case NamedConstant::Cbrt2: {
        const cpp_int root = floor_cbrt(cpp_int(2) << 384);
        return Fraction128::from_bits(low_bits(root - one));
    }
    }
    throw DomainError("unknown named constant");
}

double named_value(NamedConstant c) { return named_fraction(c).to_double(); }

} // namespace randlitt

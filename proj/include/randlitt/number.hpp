#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "randlitt/counter_rng.hpp"
#include "randlitt/errors.hpp"

namespace randlitt {

/// ||x||: distance from x to the nearest integer, in [0, 1/2].
template <std::floating_point Scalar>
Scalar dist_to_nearest_int(Scalar x)
{
    if (!std::isfinite(x)) throw DomainError("dist_to_nearest_int: non-finite input");
    return std::abs(x - std::nearbyint(x));
}

/// ||n x - shift||.
template <std::floating_point Scalar>
Scalar shifted_norm(std::uint64_t n, Scalar x, Scalar shift)
{
    if (n < 1) throw DomainError("shifted_norm: n must be >= 1");
    return dist_to_nearest_int(static_cast<Scalar>(n) * x - shift);
}

/// Uniform shift pair (gamma_n, delta_n) attached to denominator n.
struct ShiftPair {
    double gamma = 0.0;
    double delta = 0.0;
};

/// Index-addressable source of the random shifts. Each (seed, n, component)
/// is hashed independently, so the stream is immutable and order independent.
class ShiftStream {
public:
    explicit ShiftStream(std::uint64_t seed)
        : seed_(seed), key_(stream_key(seed, stream_tag::kShift)) {}

    /// Degenerate all-zero stream; only for exercising exact-vanishing cases.
    static ShiftStream zero()
    {
        ShiftStream s(0);
        s.zero_ = true;
        return s;
    }

    ShiftPair operator()(std::uint64_t n) const noexcept
    {
        if (zero_) return {};
        return {counter_uniform(key_, 2 * n), counter_uniform(key_, 2 * n + 1)};
    }

    std::uint64_t seed() const noexcept { return seed_; }
    bool is_zero() const noexcept { return zero_; }

private:
    std::uint64_t seed_;
    std::uint64_t key_;
    bool zero_ = false;
};

/// n log(n) ||n alpha - gamma_n|| ||n beta - delta_n||, natural log, n >= 2.
double littlewood_statistic(std::uint64_t n, double alpha, double beta, ShiftPair shifts);

/// Unshifted comparison statistics:
/// (n log n ||n alpha|| ||n beta||, n log^2 n ||n alpha|| ||n beta||).
std::pair<double, double> deterministic_statistics(std::uint64_t n, double alpha, double beta);

/// A point of R/Z held as a 128-bit binary fraction. Multiplication by an
/// integer wraps modulo 1 exactly, so n * x mod 1 carries an absolute error
/// below n * 2^-128 for any n.
class Fraction128 {
public:
    using Bits = unsigned __int128;

    constexpr Fraction128() = default;
    static constexpr Fraction128 from_bits(Bits bits) { return Fraction128(bits); }

    /// Exact for every double (fractional bits below 2^-128 are truncated).
    static Fraction128 from_double(double x);
    /// floor(p / q * 2^128) mod 2^128.
    static Fraction128 from_rational(std::int64_t p, std::uint64_t q);

    constexpr Bits bits() const { return bits_; }

    /// Nearest double to the represented value in [0, 1).
    double to_double() const;

    /// ||x||, rounded once to double.
    double distance_to_integer() const;

    friend constexpr Fraction128 operator*(std::uint64_t n, Fraction128 x)
    {
        return Fraction128(static_cast<Bits>(n) * x.bits_);
    }
    friend constexpr Fraction128 operator+(Fraction128 a, Fraction128 b)
    {
        return Fraction128(a.bits_ + b.bits_);
    }
    friend constexpr Fraction128 operator-(Fraction128 a, Fraction128 b)
    {
        return Fraction128(a.bits_ - b.bits_);
    }
    friend constexpr bool operator==(Fraction128, Fraction128) = default;

private:
    constexpr explicit Fraction128(Bits bits) : bits_(bits) {}
    Bits bits_ = 0;
};

/// ||n x - shift|| on the 128-bit path.
double shifted_norm_high(std::uint64_t n, Fraction128 x, double shift);

/// High-precision counterpart of littlewood_statistic.
double littlewood_statistic_high(std::uint64_t n, Fraction128 alpha, Fraction128 beta,
                                 ShiftPair shifts);

/// High-precision counterpart of deterministic_statistics.
std::pair<double, double> deterministic_statistics_high(std::uint64_t n, Fraction128 alpha,
                                                        Fraction128 beta);

/// Quadratic and cubic irrationals used as badly approximable test inputs.
enum class NamedConstant {
    Golden, ///< (sqrt 5 - 1) / 2
    Silver, ///< sqrt 2 - 1
    Cbrt2,  ///< 2^(1/3) mod 1
};

NamedConstant parse_named_constant(std::string_view name);
std::string_view to_string(NamedConstant c);
/// Closed form as text, for provenance records.
std::string_view closed_form(NamedConstant c);

/// Fractional part with 128 correct bits, computed by exact integer roots.
Fraction128 named_fraction(NamedConstant c);
/// The 128-bit value rounded to double.
double named_value(NamedConstant c);

} // namespace randlitt

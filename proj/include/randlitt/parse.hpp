#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

#include "randlitt/errors.hpp"

namespace randlitt {

/// Parses a finite real number; the whole string must be consumed.
inline double parse_real(std::string_view text, std::string_view what = "number")
{
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (text.empty() || ec != std::errc() || ptr != end || !std::isfinite(value))
        throw DomainError("cannot parse " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

/// Parses a nonnegative integer, also accepting exact scientific forms such as "1e6".
inline std::uint64_t parse_count(std::string_view text, std::string_view what = "count")
{
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (!text.empty() && ec == std::errc() && ptr == end) return value;
    const double real = parse_real(text, what);
    if (real < 0.0 || real > 9.0e18 || real != std::floor(real))
        throw DomainError("expected a nonnegative integer for " + std::string(what) + ", got '" +
                          std::string(text) + "'");
    return static_cast<std::uint64_t>(real);
}

} // namespace randlitt

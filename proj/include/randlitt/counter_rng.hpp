#pragma once

#include <cstdint>

namespace randlitt {

// Stateless counter-keyed uniform generator. Every draw is a pure function of
// (key, index), so values do not depend on query order or thread layout.

namespace stream_tag {
inline constexpr std::uint64_t kShift = 0x5348494654ULL;     // "SHIFT"
inline constexpr std::uint64_t kAreaSample = 0x415245414dULL; // "AREAM"
inline constexpr std::uint64_t kPoint = 0x504f494e54ULL;     // "POINT"
inline constexpr std::uint64_t kProbe = 0x50524f4245ULL;     // "PROBE"
} // namespace stream_tag

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives a stream key from a user seed and a purpose tag.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t tag) noexcept
{
    return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) ^ tag);
}

constexpr std::uint64_t counter_bits(std::uint64_t key, std::uint64_t index) noexcept
{
    return mix64(key + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double counter_uniform(std::uint64_t key, std::uint64_t index) noexcept
{
    return static_cast<double>(counter_bits(key, index) >> 11) * 0x1.0p-53;
}

} // namespace randlitt

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fbguard {

/// Virtual time in microseconds since the start of a run.
using Tick = std::uint64_t;

inline constexpr Tick kMicrosPerMilli = 1'000;
inline constexpr Tick kMicrosPerSecond = 1'000'000;

constexpr Tick millis(std::uint64_t ms) { return ms * kMicrosPerMilli; }
constexpr Tick seconds(std::uint64_t s) { return s * kMicrosPerSecond; }

/// Parses a non-negative decimal number of seconds ("1.5", "60", "0.000001")
/// into microseconds without going through floating point. Throws
/// std::invalid_argument on malformed input or sub-microsecond precision.
Tick parse_seconds(std::string_view text);

/// Renders microseconds as decimal seconds with trailing zeros trimmed.
std::string format_seconds(Tick t);

}  // namespace fbguard

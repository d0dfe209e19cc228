#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace qflow {

/// Shortest decimal string that parses back to exactly `x` (std::to_chars, so
/// independent of the C locale). Non-finite values print as "nan", "inf", "-inf".
std::string format_double(double x);

/// 64-bit FNV-1a digest.
std::uint64_t fnv1a64(std::string_view bytes);

/// 16 lower-case hex digits.
std::string hex64(std::uint64_t v);

}  // namespace qflow

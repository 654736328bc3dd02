#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace ndtaxis {

/// Shortest decimal text that parses back to the same double.
inline std::string format_number(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) return "nan";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, ptr);
}

}  // namespace ndtaxis

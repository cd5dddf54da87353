#pragma once

#include <charconv>
#include <cmath>
#include <optional>
#include <string>

namespace polarity {

// Shortest round-trip decimal form; deterministic across runs.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "NA";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::string format_double(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string("NA");
}

}  // namespace polarity

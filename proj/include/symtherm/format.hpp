#pragma once

#include "symtherm/error.hpp"

#include <array>
#include <charconv>
#include <string>
#include <system_error>

namespace symtherm {

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    if (ec != std::errc{}) throw Error("cannot format double");
    return std::string(buf.data(), end);
}

} // namespace symtherm

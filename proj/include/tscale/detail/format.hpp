#pragma once

#include <charconv>
#include <string>

namespace tscale::detail {

/// Round-trip decimal text (17 significant digits, shortest exponent form).
inline std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace tscale::detail

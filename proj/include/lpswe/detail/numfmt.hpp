#pragma once

#include <charconv>
#include <cstddef>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>

namespace lpswe::detail {

/// Shortest-safe decimal rendering with 17 significant digits, locale independent.
inline std::string fmt17(double v) {
    char buf[40];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    if (ec != std::errc{}) return "nan";
    return std::string(buf, end);
}

inline void write17(std::ostream& os, double v) { os << fmt17(v); }

/// Locale independent parse of a full token; returns false on trailing garbage.
inline bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

} // namespace lpswe::detail

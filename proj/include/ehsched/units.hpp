#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ehsched {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

namespace detail {

struct NumberAndSuffix {
    double value;
    std::string suffix;  // trimmed, possibly empty
};

inline NumberAndSuffix split_number(std::string_view text,
                                    std::string_view context) {
    const std::string s{trim(text)};
    if (s.empty())
        throw std::invalid_argument(std::string(context) + ": empty value");
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str())
        throw std::invalid_argument(std::string(context) + ": '" + s +
                                    "' is not a number");
    return {v, std::string(trim(std::string_view(end)))};
}

[[noreturn]] inline void bad_suffix(std::string_view context,
                                    const std::string& suffix,
                                    std::string_view allowed) {
    throw std::invalid_argument(std::string(context) + ": unknown unit '" +
                                suffix + "' (expected " +
                                std::string(allowed) + ")");
}

}  // namespace detail

/// Power in watts. Accepts W, mW, uW, dBm, or a bare number (watts).
inline double parse_power(std::string_view text, std::string_view key) {
    auto [v, suf] = detail::split_number(text, key);
    if (suf.empty() || suf == "W") return v;
    if (suf == "mW") return v * 1e-3;
    if (suf == "uW") return v * 1e-6;
    if (suf == "dBm") return std::pow(10.0, v / 10.0) * 1e-3;
    detail::bad_suffix(key, suf, "W, mW, uW, dBm");
}

/// Energy in joules. Accepts J, mJ, uJ, nJ, or a bare number (joules).
inline double parse_energy(std::string_view text, std::string_view key) {
    auto [v, suf] = detail::split_number(text, key);
    if (suf.empty() || suf == "J") return v;
    if (suf == "mJ") return v * 1e-3;
    if (suf == "uJ") return v * 1e-6;
    if (suf == "nJ") return v * 1e-9;
    detail::bad_suffix(key, suf, "J, mJ, uJ, nJ");
}

/// Time in seconds. Accepts s, ms, us, or a bare number (seconds).
inline double parse_time(std::string_view text, std::string_view key) {
    auto [v, suf] = detail::split_number(text, key);
    if (suf.empty() || suf == "s") return v;
    if (suf == "ms") return v * 1e-3;
    if (suf == "us") return v * 1e-6;
    detail::bad_suffix(key, suf, "s, ms, us");
}

/// Rate in bit/s. Accepts bps, Kbps, Mbps, Gbps, or a bare number (bit/s).
inline double parse_rate(std::string_view text, std::string_view key) {
    auto [v, suf] = detail::split_number(text, key);
    if (suf.empty() || suf == "bps") return v;
    if (suf == "Kbps" || suf == "kbps") return v * 1e3;
    if (suf == "Mbps") return v * 1e6;
    if (suf == "Gbps") return v * 1e9;
    detail::bad_suffix(key, suf, "bps, Kbps, Mbps, Gbps");
}

/// Frequency in Hz. Accepts Hz, kHz, MHz, GHz, or a bare number (Hz).
inline double parse_frequency(std::string_view text, std::string_view key) {
    auto [v, suf] = detail::split_number(text, key);
    if (suf.empty() || suf == "Hz") return v;
    if (suf == "kHz" || suf == "KHz") return v * 1e3;
    if (suf == "MHz") return v * 1e6;
    if (suf == "GHz") return v * 1e9;
    detail::bad_suffix(key, suf, "Hz, kHz, MHz, GHz");
}

/// Linear gain/ratio. Accepts dB or a bare number (already linear).
inline double parse_gain(std::string_view text, std::string_view key) {
    auto [v, suf] = detail::split_number(text, key);
    if (suf.empty()) return v;
    if (suf == "dB") return std::pow(10.0, v / 10.0);
    detail::bad_suffix(key, suf, "dB or a bare linear value");
}

/// Dimensionless number; any unit suffix is an error.
inline double parse_number(std::string_view text, std::string_view key) {
    auto [v, suf] = detail::split_number(text, key);
    if (!suf.empty())
        detail::bad_suffix(key, suf, "a bare number");
    return v;
}

}  // namespace ehsched

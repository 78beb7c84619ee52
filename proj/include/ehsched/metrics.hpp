#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

namespace ehsched {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    if (res.ec != std::errc())
        throw std::runtime_error("format_double: to_chars failed");
    return std::string(buf, res.ptr);
}

inline double parse_double_exact(std::string_view s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw std::runtime_error("parse_double_exact: bad number '" +
                                 std::string(s) + "'");
    return v;
}

/// One row per slot; user-indexed columns are flattened rate_0..rate_{K-1} etc.
struct MetricsRow {
    long slot = 0;
    int outage = 0;
    double battery = 0;       // J at slot start
    double consumed = 0;      // J
    double harvested = 0;     // J
    double s_star = 0;        // b/s
    double cap = 0;           // b/s
    int voice_dropped = 0;
    double voice_power = 0;   // W
    double data_power = 0;    // W
    std::vector<double> rates;       // b/s per data user
    std::vector<double> avg_rates;   // running time-average b/s
    std::vector<double> lambda;
    std::vector<double> mu;
};

struct MetricsLog {
    std::size_t data_users = 0;
    std::vector<MetricsRow> rows;
};

inline std::string csv_header(std::size_t users) {
    std::string h =
        "slot,outage,battery,consumed,harvested,s_star,cap,"
        "voice_dropped,voice_power,data_power";
    auto block = [&](const char* name) {
        for (std::size_t k = 0; k < users; ++k)
            h += "," + std::string(name) + "_" + std::to_string(k);
    };
    block("rate");
    block("avg_rate");
    block("lambda");
    block("mu");
    return h;
}

inline std::string to_csv_line(const MetricsRow& r) {
    std::string s = std::to_string(r.slot);
    s += "," + std::to_string(r.outage);
    for (double v : {r.battery, r.consumed, r.harvested, r.s_star, r.cap})
        s += "," + format_double(v);
    s += "," + std::to_string(r.voice_dropped);
    s += "," + format_double(r.voice_power);
    s += "," + format_double(r.data_power);
    for (const auto* vec : {&r.rates, &r.avg_rates, &r.lambda, &r.mu})
        for (double v : *vec) s += "," + format_double(v);
    return s;
}

inline void write_csv(const MetricsLog& log, std::ostream& os) {
    os << csv_header(log.data_users) << "\n";
    for (const auto& r : log.rows) os << to_csv_line(r) << "\n";
}

inline void write_csv_file(const MetricsLog& log, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_csv_file: cannot open " + path);
    write_csv(log, f);
}

inline MetricsLog read_csv(std::istream& is) {
    MetricsLog log;
    std::string line;
    if (!std::getline(is, line))
        throw std::runtime_error("read_csv: empty input");
    // Infer user count from the header layout (10 fixed + 4K columns).
    std::size_t cols = 1;
    for (char c : line)
        if (c == ',') ++cols;
    if (cols < 10 || (cols - 10) % 4 != 0)
        throw std::runtime_error("read_csv: unexpected header");
    log.data_users = (cols - 10) / 4;

    auto split = [](const std::string& l) {
        std::vector<std::string_view> out;
        std::string_view sv = l;
        std::size_t pos = 0;
        while (true) {
            std::size_t c = sv.find(',', pos);
            if (c == std::string_view::npos) {
                out.push_back(sv.substr(pos));
                break;
            }
            out.push_back(sv.substr(pos, c - pos));
            pos = c + 1;
        }
        return out;
    };

    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = split(line);
        if (f.size() != cols)
            throw std::runtime_error("read_csv: ragged row");
        MetricsRow r;
        std::size_t i = 0;
        r.slot = static_cast<long>(parse_double_exact(f[i++]));
        r.outage = static_cast<int>(parse_double_exact(f[i++]));
        r.battery = parse_double_exact(f[i++]);
        r.consumed = parse_double_exact(f[i++]);
        r.harvested = parse_double_exact(f[i++]);
        r.s_star = parse_double_exact(f[i++]);
        r.cap = parse_double_exact(f[i++]);
        r.voice_dropped = static_cast<int>(parse_double_exact(f[i++]));
        r.voice_power = parse_double_exact(f[i++]);
        r.data_power = parse_double_exact(f[i++]);
        for (auto* vec : {&r.rates, &r.avg_rates, &r.lambda, &r.mu}) {
            vec->resize(log.data_users);
            for (std::size_t k = 0; k < log.data_users; ++k)
                (*vec)[k] = parse_double_exact(f[i++]);
        }
        log.rows.push_back(std::move(r));
    }
    return log;
}

inline MetricsLog read_csv_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_csv_file: cannot open " + path);
    return read_csv(f);
}

/// Jain fairness index (sum x)^2 / (n sum x^2), 1/n..1.
inline double jain_index(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("jain_index: empty");
    double s = 0, s2 = 0;
    for (double v : x) {
        if (v < 0) throw std::invalid_argument("jain_index: negative value");
        s += v;
        s2 += v * v;
    }
    if (s2 == 0) throw std::invalid_argument("jain_index: all-zero input");
    return s * s / (static_cast<double>(x.size()) * s2);
}

struct RunSummary {
    long slots = 0;
    long outages = 0;
    double mean_battery = 0;
    double mean_consumed = 0;
    std::vector<double> mean_rate;   // per user, whole run
    double sum_rate = 0;
    double jain = 0;
    double min_rate = 0;
    double max_rate = 0;
};

/// Statistics over rows [first_row, end); pass first_row > 0 to skip the
/// transient.
inline RunSummary summarize_range(const MetricsLog& log,
                                  std::size_t first_row) {
    RunSummary s;
    if (first_row >= log.rows.size()) return s;
    s.slots = static_cast<long>(log.rows.size() - first_row);
    s.mean_rate.assign(log.data_users, 0.0);
    for (std::size_t i = first_row; i < log.rows.size(); ++i) {
        const MetricsRow& r = log.rows[i];
        s.outages += r.outage;
        s.mean_battery += r.battery;
        s.mean_consumed += r.consumed;
        for (std::size_t k = 0; k < log.data_users; ++k)
            s.mean_rate[k] += r.rates[k];
    }
    const double n = static_cast<double>(s.slots);
    s.mean_battery /= n;
    s.mean_consumed /= n;
    for (auto& v : s.mean_rate) v /= n;
    s.sum_rate = std::accumulate(s.mean_rate.begin(), s.mean_rate.end(), 0.0);
    if (!s.mean_rate.empty()) {
        s.jain = s.sum_rate > 0 ? jain_index(s.mean_rate) : 0.0;
        auto [lo, hi] =
            std::minmax_element(s.mean_rate.begin(), s.mean_rate.end());
        s.min_rate = *lo;
        s.max_rate = *hi;
    }
    return s;
}

inline RunSummary summarize(const MetricsLog& log) {
    return summarize_range(log, 0);
}

/// Summary over the trailing `fraction` of the run.
inline RunSummary summarize_tail(const MetricsLog& log, double fraction) {
    if (fraction <= 0 || fraction > 1)
        throw std::invalid_argument("summarize_tail: fraction in (0, 1]");
    const auto n = log.rows.size();
    const auto keep =
        std::max<std::size_t>(1, static_cast<std::size_t>(fraction * n));
    return summarize_range(log, n - std::min(keep, n));
}

}  // namespace ehsched

#pragma once

#include <charconv>
#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "windml/pipeline/record.hpp"

namespace windml {

// Documented SCADA CSV schema (bit-exact):
//   timestamp,turbine_id,state,wind_speed_heated,wind_speed,wind_direction_deg,temperature_c,power_kw
// ISO-8601 UTC timestamps, '.' decimal separator, UTF-8. The heated
// anemometer column feeds wind_speed; the classical one is carried but unused.
inline const char* kScadaHeader =
    "timestamp,turbine_id,state,wind_speed_heated,wind_speed,wind_direction_deg,temperature_c,power_kw";

struct RejectedLine {
    std::size_t line_number = 0; // 1-based, header is line 1
    std::string reason;
};

struct ParseResult {
    std::vector<RawRecord> records;
    std::vector<RejectedLine> rejections;
};

namespace detail {

// Days since 1970-01-01 for a civil date (Hinnant's algorithm).
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yr = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

inline std::optional<Timestamp> parse_iso8601_utc(std::string_view s) {
    // Accepts YYYY-MM-DDTHH:MM:SS with optional trailing 'Z'.
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
    int y, mo, d, h, mi, se;
    if (std::sscanf(std::string(s).c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &se) != 6)
        return std::nullopt;
    if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 || se < 0 || se > 60)
        return std::nullopt;
    return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + se;
}

inline std::string format_iso8601_utc(Timestamp t) {
    int y, m, d;
    civil_from_days(t >= 0 ? t / 86400 : (t - 86399) / 86400, y, m, d);
    std::int64_t sod = t % 86400;
    if (sod < 0) sod += 86400;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", y, m, d,
                  static_cast<int>(sod / 3600), static_cast<int>(sod / 60 % 60),
                  static_cast<int>(sod % 60));
    return buf;
}

inline std::optional<double> parse_double(std::string_view s) {
    double v;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

inline std::vector<std::string_view> split_csv_line(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline std::optional<TurbineState> parse_state(std::string_view s) {
    if (s == "FULL") return TurbineState::FullOperation;
    if (s == "START") return TurbineState::Start;
    if (s == "STOP") return TurbineState::Stop;
    if (s == "MAINT") return TurbineState::Maintenance;
    if (s == "UNKNOWN") return TurbineState::Unknown;
    return std::nullopt;
}

inline const char* state_code(TurbineState s) {
    switch (s) {
        case TurbineState::FullOperation: return "FULL";
        case TurbineState::Start: return "START";
        case TurbineState::Stop: return "STOP";
        case TurbineState::Maintenance: return "MAINT";
        default: return "UNKNOWN";
    }
}

} // namespace detail

// Parses a SCADA CSV stream. Malformed lines land in the rejection report
// with a reason, never silently dropped. A missing mandatory column in the
// header is a schema error and throws.
inline ParseResult parse_scada(std::istream& source) {
    ParseResult result;
    std::string line;
    if (!std::getline(source, line)) throw std::runtime_error("parse_scada: empty input, no header");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = detail::split_csv_line(line);
    std::unordered_map<std::string_view, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* name : {"timestamp", "turbine_id", "state", "wind_speed_heated",
                             "wind_direction_deg", "temperature_c", "power_kw"}) {
        if (!col.count(name))
            throw std::runtime_error(std::string("parse_scada: missing mandatory column '") + name + "'");
    }
    const std::size_t c_ts = col["timestamp"], c_id = col["turbine_id"], c_state = col["state"],
                      c_ws = col["wind_speed_heated"], c_dir = col["wind_direction_deg"],
                      c_temp = col["temperature_c"], c_pow = col["power_kw"];

    std::size_t line_number = 1;
    while (std::getline(source, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        auto reject = [&](std::string reason) {
            result.rejections.push_back({line_number, std::move(reason)});
        };
        if (fields.size() != header.size()) {
            reject("field count mismatch");
            continue;
        }
        const auto ts = detail::parse_iso8601_utc(fields[c_ts]);
        if (!ts) { reject("unparseable timestamp"); continue; }
        const auto state = detail::parse_state(fields[c_state]);
        if (!state) { reject("unknown state code"); continue; }
        const auto ws = detail::parse_double(fields[c_ws]);
        if (!ws) { reject("unparseable wind_speed_heated"); continue; }
        const auto dir = detail::parse_double(fields[c_dir]);
        if (!dir) { reject("unparseable wind_direction_deg"); continue; }
        const auto temp = detail::parse_double(fields[c_temp]);
        if (!temp) { reject("unparseable temperature_c"); continue; }
        const auto pow = detail::parse_double(fields[c_pow]);
        if (!pow) { reject("unparseable power_kw"); continue; }
        if (*ws < 0.0) { reject("negative wind speed"); continue; }
        if (*dir < 0.0 || *dir >= 360.0) { reject("wind direction outside [0, 360)"); continue; }
        if (*pow < -50.0) { reject("power below -50 kW"); continue; }

        RawRecord r;
        r.timestamp = *ts;
        r.turbine_id = std::string(fields[c_id]);
        r.state = *state;
        r.wind_speed = *ws;
        r.wind_direction = *dir;
        r.temperature = *temp;
        r.power = *pow;
        result.records.push_back(std::move(r));
    }
    return result;
}

inline void write_scada(std::ostream& out, const std::vector<RawRecord>& records) {
    out << kScadaHeader << '\n';
    char buf[64];
    for (const auto& r : records) {
        out << detail::format_iso8601_utc(r.timestamp) << ',' << r.turbine_id << ','
            << detail::state_code(r.state) << ',';
        std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%.6g,%.6g", r.wind_speed, r.wind_speed,
                      r.wind_direction, r.temperature, r.power);
        out << buf << '\n';
    }
}

// Sidecar rejection report: line number and reason.
inline void write_rejections(std::ostream& out, const std::vector<RejectedLine>& rejections) {
    out << "line,reason\n";
    for (const auto& r : rejections) out << r.line_number << ',' << r.reason << '\n';
}

} // namespace windml

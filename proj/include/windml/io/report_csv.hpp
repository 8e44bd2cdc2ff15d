#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "windml/eval/baselines.hpp"
#include "windml/eval/farm.hpp"
#include "windml/pipeline/scada_csv.hpp"

namespace windml {

namespace detail {

inline std::string fmt_double(double v, const char* spec = "%.17g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

} // namespace detail

// Engineered-feature CSV: one row per 30-minute instant.
inline const char* kFeatureHeader = "timestamp,w,d_cos,d_sin,t,w_var,d_var_re,d_var_im,y";

inline void write_features(std::ostream& out, const TurbineDataset& ds) {
    out << kFeatureHeader << '\n';
    for (const auto& r : ds.rows) {
        out << detail::format_iso8601_utc(r.timestamp);
        for (double v : {r.w, r.d_cos, r.d_sin, r.t, r.w_var, r.d_var_re, r.d_var_im, r.y})
            out << ',' << detail::fmt_double(v);
        out << '\n';
    }
}

inline TurbineDataset read_features(std::istream& in, const std::string& turbine_id) {
    TurbineDataset ds;
    ds.turbine_id = turbine_id;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_features: empty input");
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 9)
            throw std::runtime_error("read_features: bad field count at line " +
                                     std::to_string(line_no));
        const auto ts = detail::parse_iso8601_utc(fields[0]);
        if (!ts)
            throw std::runtime_error("read_features: bad timestamp at line " +
                                     std::to_string(line_no));
        FeatureRow r;
        r.timestamp = *ts;
        double* slots[] = {&r.w, &r.d_cos, &r.d_sin, &r.t, &r.w_var, &r.d_var_re, &r.d_var_im, &r.y};
        for (int i = 0; i < 8; ++i) {
            const auto v = detail::parse_double(fields[static_cast<std::size_t>(i + 1)]);
            if (!v)
                throw std::runtime_error("read_features: bad number at line " +
                                         std::to_string(line_no));
            *slots[i] = *v;
        }
        ds.rows.push_back(r);
    }
    return ds;
}

// Per-block machine CSV: method,feature_set,mode,block_id,rmse_kw
inline void write_block_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
    out << "method,feature_set,mode,block_id,rmse_kw\n";
    for (const auto& r : reports)
        for (std::size_t b = 0; b < r.block_rmse.size(); ++b)
            out << r.method_name << ',' << to_string(r.feature_set) << ',' << to_string(r.mode)
                << ',' << b << ',' << detail::fmt_double(r.block_rmse[b], "%.10g") << '\n';
}

// Summary CSV: method,feature_set,mode,mean_rmse,sd_rmse,pct_ip
// sd_rmse is empty with a single block (absent, not zero).
inline void write_summary_csv(std::ostream& out, const std::vector<EvalReport>& reports) {
    out << "method,feature_set,mode,mean_rmse,sd_rmse,pct_ip\n";
    for (const auto& r : reports) {
        out << r.method_name << ',' << to_string(r.feature_set) << ',' << to_string(r.mode) << ','
            << detail::fmt_double(r.mean_rmse, "%.10g") << ',';
        if (r.sd_rmse) out << detail::fmt_double(*r.sd_rmse, "%.10g");
        out << ',' << detail::fmt_double(r.pct_ip, "%.10g") << '\n';
    }
}

// Human-readable summary table.
inline void write_summary_table(std::ostream& out, const std::vector<EvalReport>& reports) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-22s %-14s %-16s %12s %12s %8s", "method", "feature_set",
                  "mode", "mean_rmse", "sd_rmse", "pct_ip");
    out << buf << '\n';
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf), "%-22s %-14s %-16s %12.2f %12s %8.2f",
                      r.method_name.c_str(), to_string(r.feature_set).c_str(),
                      to_string(r.mode).c_str(), r.mean_rmse,
                      r.sd_rmse ? detail::fmt_double(*r.sd_rmse, "%.2f").c_str() : "-", r.pct_ip);
        out << buf << '\n';
    }
}

// Power-curve knot table: CSV `wind_speed_ms,power_kw` with header; cut-in
// and cut-out speeds live in a companion JSON (see model_json.hpp).
inline std::vector<std::pair<double, double>> read_power_curve_knots(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("read_power_curve_knots: empty input");
    std::vector<std::pair<double, double>> knots;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() != 2)
            throw std::runtime_error("read_power_curve_knots: bad field count at line " +
                                     std::to_string(line_no));
        const auto w = detail::parse_double(fields[0]);
        const auto p = detail::parse_double(fields[1]);
        if (!w || !p)
            throw std::runtime_error("read_power_curve_knots: bad number at line " +
                                     std::to_string(line_no));
        knots.emplace_back(*w, *p);
    }
    return knots;
}

} // namespace windml

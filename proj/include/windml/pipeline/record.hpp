#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace windml {

// Seconds since the Unix epoch, UTC. SCADA records arrive on 10-minute
// boundaries; 30-minute windows align to :00 and :30.
using Timestamp = std::int64_t;

constexpr Timestamp kTenMinutes = 600;
constexpr Timestamp kThirtyMinutes = 1800;

enum class TurbineState { FullOperation, Start, Stop, Maintenance, Unknown };

// One 10-minute SCADA measurement for one turbine.
struct RawRecord {
    Timestamp timestamp = 0;
    std::string turbine_id;
    double wind_speed = 0.0;     // m/s, heated anemometer
    double wind_direction = 0.0; // degrees in [0, 360)
    double temperature = 0.0;    // degrees Celsius
    double power = 0.0;          // kW; slightly negative standby draw allowed
    TurbineState state = TurbineState::Unknown;
};

// The 7 explanatory variables plus the target power for one 30-minute instant.
struct FeatureRow {
    Timestamp timestamp = 0;
    double w = 0.0;        // mean wind speed, m/s
    double d_cos = 0.0;    // cos of mean direction
    double d_sin = 0.0;    // sin of mean direction
    double t = 0.0;        // mean temperature, Celsius
    double w_var = 0.0;    // wind-speed sample variance over the window
    double d_var_re = 0.0; // real part of the complex direction variance
    double d_var_im = 0.0; // imaginary part of the complex direction variance
    double y = 0.0;        // mean power, kW
};

struct TurbineDataset {
    std::string turbine_id;
    std::vector<FeatureRow> rows; // sorted by timestamp, no duplicates
};

enum class FeatureSet { WindOnly, AllVariables };

constexpr int feature_count(FeatureSet fs) { return fs == FeatureSet::WindOnly ? 1 : 7; }

// Explanatory variables of a row in the documented column order
// (w, d_cos, d_sin, t, w_var, d_var_re, d_var_im), or just (w).
inline std::vector<double> features_of(const FeatureRow& r, FeatureSet fs) {
    if (fs == FeatureSet::WindOnly) return {r.w};
    return {r.w, r.d_cos, r.d_sin, r.t, r.w_var, r.d_var_re, r.d_var_im};
}

inline const char* feature_name(FeatureSet fs, int j) {
    static const char* all[] = {"w", "d_cos", "d_sin", "t", "w_var", "d_var_re", "d_var_im"};
    return fs == FeatureSet::WindOnly ? "w" : all[j];
}

inline std::string to_string(FeatureSet fs) {
    return fs == FeatureSet::WindOnly ? "wind_only" : "all_variables";
}

} // namespace windml

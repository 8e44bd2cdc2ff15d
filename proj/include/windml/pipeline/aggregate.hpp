#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "windml/common/stats.hpp"
#include "windml/pipeline/circular.hpp"
#include "windml/pipeline/record.hpp"

namespace windml {

// Keeps only fully operational records, order preserved. Idempotent.
inline std::vector<RawRecord> filter_operational(const std::vector<RawRecord>& records) {
    std::vector<RawRecord> out;
    out.reserve(records.size());
    for (const auto& r : records)
        if (r.state == TurbineState::FullOperation) out.push_back(r);
    return out;
}

struct AggregateResult {
    TurbineDataset dataset;
    std::size_t skipped_windows = 0; // windows missing one of the 3 records
};

// Groups 10-minute records of a single turbine into aligned 30-minute
// windows (:00 / :30 boundaries, UTC) and emits one FeatureRow per complete
// window. A window is emitted only when all 3 expected records are present;
// incomplete windows are counted, not emitted. Variances use the n-1
// denominator; direction aggregation goes through circular statistics.
inline AggregateResult aggregate_30min(const std::vector<RawRecord>& records) {
    AggregateResult result;
    if (records.empty()) return result;
    result.dataset.turbine_id = records.front().turbine_id;
    for (const auto& r : records)
        if (r.turbine_id != result.dataset.turbine_id)
            throw std::invalid_argument("aggregate_30min: mixed turbine ids");

    std::size_t i = 0;
    while (i < records.size()) {
        const Timestamp window = records[i].timestamp - ((records[i].timestamp % kThirtyMinutes + kThirtyMinutes) % kThirtyMinutes);
        std::vector<const RawRecord*> group;
        while (i < records.size() && records[i].timestamp < window + kThirtyMinutes) {
            group.push_back(&records[i]);
            ++i;
        }
        if (group.size() != 3) {
            ++result.skipped_windows;
            continue;
        }

        std::vector<double> speeds, dirs, temps, powers;
        for (const auto* r : group) {
            speeds.push_back(r->wind_speed);
            dirs.push_back(r->wind_direction);
            temps.push_back(r->temperature);
            powers.push_back(r->power);
        }

        FeatureRow row;
        row.timestamp = window;
        row.w = mean(speeds);
        row.t = mean(temps);
        row.y = mean(powers);
        row.w_var = sample_variance(speeds);
        const double dir_mean = circular_mean(dirs);
        row.d_cos = std::cos(deg_to_rad(dir_mean));
        row.d_sin = std::sin(deg_to_rad(dir_mean));
        const auto dvar = circular_pseudo_variance(dirs);
        row.d_var_re = dvar.real();
        row.d_var_im = dvar.imag();
        result.dataset.rows.push_back(row);
    }
    return result;
}

} // namespace windml

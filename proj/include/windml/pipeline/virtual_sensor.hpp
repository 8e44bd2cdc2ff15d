#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "windml/pipeline/record.hpp"

namespace windml {

// Farm-averaged "virtual sensor" features: per timestamp present in every
// input dataset, each scalar feature is the arithmetic mean over turbines;
// direction is averaged via the resultant of (d_cos, d_sin) renormalized to
// unit length. The target y is deliberately NOT averaged (the stability
// experiment still predicts each turbine's own power); it is emitted as NaN
// so accidental use fails loudly.
inline TurbineDataset virtual_sensor_average(const std::vector<TurbineDataset>& farm) {
    if (farm.empty()) throw std::invalid_argument("virtual_sensor_average: empty farm");

    // Timestamp -> row index per dataset, intersected across the farm.
    std::map<Timestamp, std::vector<std::size_t>> at;
    for (const auto& r : farm[0].rows) at[r.timestamp] = {0};
    for (std::size_t d = 1; d < farm.size(); ++d) {
        std::map<Timestamp, std::size_t> idx;
        for (std::size_t i = 0; i < farm[d].rows.size(); ++i) idx[farm[d].rows[i].timestamp] = i;
        for (auto it = at.begin(); it != at.end();) {
            auto found = idx.find(it->first);
            if (found == idx.end()) {
                it = at.erase(it);
            } else {
                it->second.push_back(found->second);
                ++it;
            }
        }
    }
    // Row indices for dataset 0 were not stored above; rebuild them.
    {
        std::map<Timestamp, std::size_t> idx0;
        for (std::size_t i = 0; i < farm[0].rows.size(); ++i) idx0[farm[0].rows[i].timestamp] = i;
        for (auto& [ts, v] : at) v[0] = idx0[ts];
    }
    if (at.empty()) throw std::invalid_argument("virtual_sensor_average: empty timestamp intersection");

    TurbineDataset out;
    out.turbine_id = "farm_average";
    const double n = static_cast<double>(farm.size());
    for (const auto& [ts, indices] : at) {
        FeatureRow avg;
        avg.timestamp = ts;
        double cx = 0.0, sy = 0.0;
        for (std::size_t d = 0; d < farm.size(); ++d) {
            const FeatureRow& r = farm[d].rows[indices[d]];
            avg.w += r.w;
            avg.t += r.t;
            avg.w_var += r.w_var;
            avg.d_var_re += r.d_var_re;
            avg.d_var_im += r.d_var_im;
            cx += r.d_cos;
            sy += r.d_sin;
        }
        avg.w /= n;
        avg.t /= n;
        avg.w_var /= n;
        avg.d_var_re /= n;
        avg.d_var_im /= n;
        const double mag = std::hypot(cx, sy);
        if (mag < 1e-12)
            throw std::domain_error("virtual_sensor_average: degenerate direction resultant");
        avg.d_cos = cx / mag;
        avg.d_sin = sy / mag;
        avg.y = std::numeric_limits<double>::quiet_NaN();
        out.rows.push_back(avg);
    }
    return out;
}

} // namespace windml

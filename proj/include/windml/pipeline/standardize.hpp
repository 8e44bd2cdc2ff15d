#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "windml/pipeline/record.hpp"

namespace windml {

// Per-feature training-set mean and standard deviation (n-1 convention).
// Test rows must be transformed with training stats only.
struct StandardizationStats {
    std::vector<double> means;
    std::vector<double> sds; // all > 0; a constant column is an error
};

inline StandardizationStats compute_stats(const std::vector<std::vector<double>>& rows,
                                          FeatureSet fs = FeatureSet::AllVariables) {
    if (rows.size() < 2) throw std::invalid_argument("compute_stats: need >= 2 rows");
    const std::size_t p = rows.front().size();
    StandardizationStats stats;
    stats.means.assign(p, 0.0);
    stats.sds.assign(p, 0.0);
    const double n = static_cast<double>(rows.size());
    for (const auto& r : rows)
        for (std::size_t j = 0; j < p; ++j) stats.means[j] += r[j];
    for (std::size_t j = 0; j < p; ++j) stats.means[j] /= n;
    for (const auto& r : rows)
        for (std::size_t j = 0; j < p; ++j) {
            const double d = r[j] - stats.means[j];
            stats.sds[j] += d * d;
        }
    for (std::size_t j = 0; j < p; ++j) {
        stats.sds[j] = std::sqrt(stats.sds[j] / (n - 1.0));
        if (stats.sds[j] <= 0.0)
            throw std::invalid_argument(std::string("compute_stats: constant column '") +
                                        feature_name(fs, static_cast<int>(j)) + "'");
    }
    return stats;
}

inline std::vector<double> apply_stats(const StandardizationStats& stats,
                                       const std::vector<double>& row) {
    if (row.size() != stats.means.size())
        throw std::invalid_argument("apply_stats: feature count mismatch");
    std::vector<double> out(row.size());
    for (std::size_t j = 0; j < row.size(); ++j) out[j] = (row[j] - stats.means[j]) / stats.sds[j];
    return out;
}

inline std::vector<std::vector<double>> apply_stats(const StandardizationStats& stats,
                                                    const std::vector<std::vector<double>>& rows) {
    std::vector<std::vector<double>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(apply_stats(stats, r));
    return out;
}

inline std::vector<std::vector<double>> feature_matrix(const TurbineDataset& ds, FeatureSet fs) {
    std::vector<std::vector<double>> rows;
    rows.reserve(ds.rows.size());
    for (const auto& r : ds.rows) rows.push_back(features_of(r, fs));
    return rows;
}

inline std::vector<double> target_vector(const TurbineDataset& ds) {
    std::vector<double> y;
    y.reserve(ds.rows.size());
    for (const auto& r : ds.rows) y.push_back(r.y);
    return y;
}

} // namespace windml

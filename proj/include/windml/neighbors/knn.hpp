#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "windml/eval/metrics.hpp"
#include "windml/pipeline/standardize.hpp"

namespace windml {

// k-nearest-neighbor regression on standardized features. Neighbor search
// is an exact brute-force scan; at the data sizes in play (~8000 rows) this
// is cheap and avoids index-structure edge cases.
struct KnnModel {
    int k = 1;
    std::vector<std::vector<double>> stored_rows; // standardized
    std::vector<double> stored_targets;           // kW
    StandardizationStats stats;

    double predict(const std::vector<double>& raw_features) const {
        if (stored_rows.empty()) throw std::logic_error("KnnModel::predict: empty model");
        const auto q = apply_stats(stats, raw_features);
        const std::size_t n = stored_rows.size();
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::vector<double> dist(n);
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < q.size(); ++j) {
                const double diff = stored_rows[i][j] - q[j];
                d += diff * diff;
            }
            dist[i] = d;
        }
        const auto kk = static_cast<std::size_t>(k);
        // stable partial sort: distance ties break by stored-row index
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
        double sum = 0.0;
        for (std::size_t i = 0; i < kk; ++i) sum += stored_targets[order[i]];
        return sum / static_cast<double>(kk);
    }
    double predict(const FeatureRow& row, FeatureSet fs) const {
        return predict(features_of(row, fs));
    }
};

inline KnnModel fit_knn(const std::vector<std::vector<double>>& rows,
                        const std::vector<double>& targets, int k,
                        FeatureSet fs = FeatureSet::AllVariables) {
    if (k < 1 || static_cast<std::size_t>(k) > rows.size())
        throw std::invalid_argument("fit_knn: need 1 <= k <= n");
    KnnModel model;
    model.k = k;
    model.stats = compute_stats(rows, fs);
    model.stored_rows = apply_stats(model.stats, rows);
    model.stored_targets = targets;
    return model;
}

inline double predict_knn(const KnnModel& model, const std::vector<double>& raw_features) {
    return model.predict(raw_features);
}

// Grid search for k minimizing validation RMSE; ties go to the smallest k.
inline int select_k(const std::vector<std::vector<double>>& train_rows,
                    const std::vector<double>& train_targets,
                    const std::vector<std::vector<double>>& validation_rows,
                    const std::vector<double>& validation_targets, std::vector<int> k_grid,
                    FeatureSet fs = FeatureSet::AllVariables) {
    if (k_grid.empty()) throw std::invalid_argument("select_k: empty grid");
    std::sort(k_grid.begin(), k_grid.end());
    int best_k = k_grid.front();
    double best_rmse = std::numeric_limits<double>::infinity();
    for (int k : k_grid) {
        const KnnModel model = fit_knn(train_rows, train_targets, k, fs);
        std::vector<double> preds;
        preds.reserve(validation_rows.size());
        for (const auto& row : validation_rows) preds.push_back(model.predict(row));
        const double err = rmse(preds, validation_targets);
        if (err < best_rmse) {
            best_rmse = err;
            best_k = k;
        }
    }
    return best_k;
}

} // namespace windml

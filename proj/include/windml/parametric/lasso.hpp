#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "windml/parametric/linear.hpp"
#include "windml/pipeline/standardize.hpp"

namespace windml {

namespace detail {

inline double soft_threshold(double z, double lambda) {
    if (z > lambda) return z - lambda;
    if (z < -lambda) return z + lambda;
    return 0.0;
}

// Coordinate descent for (1/2) sum (y - Xa)^2 + lambda sum |a_j| on
// standardized columns and centered targets. Stops when the largest
// coefficient change in a sweep drops below 1e-7.
inline std::vector<double> lasso_cd(const std::vector<std::vector<double>>& x_std,
                                    const std::vector<double>& y_centered, double lambda,
                                    std::vector<double> slopes) {
    const std::size_t n = x_std.size();
    const std::size_t p = n ? x_std.front().size() : 0;
    if (slopes.size() != p) slopes.assign(p, 0.0);

    // Column squared norms and current residuals.
    std::vector<double> col_sq(p, 0.0);
    for (const auto& row : x_std)
        for (std::size_t j = 0; j < p; ++j) col_sq[j] += row[j] * row[j];
    std::vector<double> residual(y_centered);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j) residual[i] -= slopes[j] * x_std[i][j];

    constexpr double kTol = 1e-7;
    constexpr int kMaxSweeps = 10000;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (col_sq[j] == 0.0) continue;
            double rho = 0.0; // x_j^T (residual + a_j x_j)
            for (std::size_t i = 0; i < n; ++i) rho += x_std[i][j] * residual[i];
            rho += slopes[j] * col_sq[j];
            const double updated = soft_threshold(rho, lambda) / col_sq[j];
            const double delta = updated - slopes[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) residual[i] -= delta * x_std[i][j];
                slopes[j] = updated;
            }
            max_change = std::max(max_change, std::abs(delta));
        }
        if (max_change < kTol) break;
    }
    return slopes;
}

} // namespace detail

// Smallest penalty that zeroes every slope: max_j |x_j^T (y - ybar)| on
// standardized columns.
inline double lasso_lambda_max(const std::vector<std::vector<double>>& x_std,
                               const std::vector<double>& y_centered) {
    const std::size_t p = x_std.empty() ? 0 : x_std.front().size();
    double lmax = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        double dot = 0.0;
        for (std::size_t i = 0; i < x_std.size(); ++i) dot += x_std[i][j] * y_centered[i];
        lmax = std::max(lmax, std::abs(dot));
    }
    return lmax;
}

// 50 log-spaced values from lambda_max down to 1e-4 lambda_max.
inline std::vector<double> default_lambda_grid(double lambda_max, int count = 50) {
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        grid[static_cast<std::size_t>(i)] =
            lambda_max * std::pow(1e-4, static_cast<double>(i) / (count - 1));
    return grid;
}

// LASSO at a fixed penalty; standardization is internal, coefficients come
// back in original units with an unpenalized intercept.
inline LinearModel fit_lasso_at(const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& targets, double lambda,
                                FeatureSet feature_set) {
    const auto stats = compute_stats(rows, feature_set);
    const auto x_std = apply_stats(stats, rows);
    double ybar = 0.0;
    for (double y : targets) ybar += y;
    ybar /= static_cast<double>(targets.size());
    std::vector<double> yc(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) yc[i] = targets[i] - ybar;

    const auto slopes_std = detail::lasso_cd(x_std, yc, lambda, {});

    LinearModel model;
    model.feature_set = feature_set;
    model.coefficients.resize(slopes_std.size());
    model.intercept = ybar;
    for (std::size_t j = 0; j < slopes_std.size(); ++j) {
        model.coefficients[j] = slopes_std[j] / stats.sds[j];
        model.intercept -= model.coefficients[j] * stats.means[j];
    }
    return model;
}

// Cross-validated LASSO: contiguous K folds, penalty chosen to minimize
// mean validation RMSE, ties to the larger penalty; final refit on all data.
inline LinearModel fit_lasso(const std::vector<std::vector<double>>& rows,
                             const std::vector<double>& targets,
                             std::vector<double> lambda_grid, int cv_folds,
                             FeatureSet feature_set) {
    if (cv_folds < 2) throw std::invalid_argument("fit_lasso: cv_folds must be >= 2");
    if (lambda_grid.empty()) throw std::invalid_argument("fit_lasso: empty lambda grid");
    for (std::size_t i = 1; i < lambda_grid.size(); ++i)
        if (lambda_grid[i] > lambda_grid[i - 1])
            throw std::invalid_argument("fit_lasso: lambda grid must be descending");

    const std::size_t n = rows.size();
    std::vector<double> cv_sse(lambda_grid.size(), 0.0);
    std::vector<std::size_t> cv_count(lambda_grid.size(), 0);

    for (int fold = 0; fold < cv_folds; ++fold) {
        const std::size_t lo = n * static_cast<std::size_t>(fold) / static_cast<std::size_t>(cv_folds);
        const std::size_t hi = n * static_cast<std::size_t>(fold + 1) / static_cast<std::size_t>(cv_folds);
        std::vector<std::vector<double>> train_x;
        std::vector<double> train_y;
        for (std::size_t i = 0; i < n; ++i) {
            if (i >= lo && i < hi) continue;
            train_x.push_back(rows[i]);
            train_y.push_back(targets[i]);
        }
        const auto stats = compute_stats(train_x, feature_set);
        const auto x_std = apply_stats(stats, train_x);
        double ybar = 0.0;
        for (double y : train_y) ybar += y;
        ybar /= static_cast<double>(train_y.size());
        std::vector<double> yc(train_y.size());
        for (std::size_t i = 0; i < train_y.size(); ++i) yc[i] = train_y[i] - ybar;

        std::vector<double> slopes; // warm start along the descending path
        for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
            slopes = detail::lasso_cd(x_std, yc, lambda_grid[li], slopes);
            for (std::size_t i = lo; i < hi; ++i) {
                const auto xs = apply_stats(stats, rows[i]);
                double pred = ybar;
                for (std::size_t j = 0; j < slopes.size(); ++j) pred += slopes[j] * xs[j];
                const double err = pred - targets[i];
                cv_sse[li] += err * err;
                ++cv_count[li];
            }
        }
    }

    std::size_t best = 0;
    double best_rmse = std::numeric_limits<double>::infinity();
    for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
        const double rmse = std::sqrt(cv_sse[li] / static_cast<double>(cv_count[li]));
        if (rmse < best_rmse) { // strict: ties keep the earlier, larger lambda
            best_rmse = rmse;
            best = li;
        }
    }
    return fit_lasso_at(rows, targets, lambda_grid[best], feature_set);
}

} // namespace windml

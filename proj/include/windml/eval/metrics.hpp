#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace windml {

// Root mean squared error, sqrt((1/T) sum (yhat - y)^2), in kW.
inline double rmse(std::span<const double> predictions, std::span<const double> observations) {
    if (predictions.size() != observations.size())
        throw std::invalid_argument("rmse: length mismatch");
    if (predictions.empty()) throw std::invalid_argument("rmse: empty input");
    double sse = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - observations[i];
        sse += d * d;
    }
    return std::sqrt(sse / static_cast<double>(predictions.size()));
}

// Error as a percentage of the farm's installed power:
// 100 * mean_rmse / (n_turbines * rated_per_turbine).
inline double pct_installed_power(double mean_rmse, int n_turbines, double rated_per_turbine_kw) {
    if (mean_rmse < 0.0 || n_turbines <= 0 || rated_per_turbine_kw <= 0.0)
        throw std::invalid_argument("pct_installed_power: arguments must be positive");
    return 100.0 * mean_rmse / (static_cast<double>(n_turbines) * rated_per_turbine_kw);
}

} // namespace windml

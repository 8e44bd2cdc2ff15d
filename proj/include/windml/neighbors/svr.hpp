#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "windml/eval/metrics.hpp"
#include "windml/pipeline/standardize.hpp"

namespace windml {

// epsilon-insensitive support vector regression with a Gaussian kernel
// K(u, v) = exp(-gamma ||u - v||^2) on standardized features.
struct SvrModel {
    std::vector<double> coefficients; // beta = alpha - alpha*, support rows only
    double bias = 0.0;                // kW
    double epsilon = 0.0;             // insensitivity tube, kW
    double cost = 1.0;                // box constraint
    double gamma = 1.0;               // RBF bandwidth
    std::vector<std::vector<double>> support_rows; // standardized
    StandardizationStats stats;
    bool converged = false;
    double dual_objective = 0.0; // at the returned solution
    double kkt_gap = 0.0;        // max violating-pair gap at exit

    double kernel(const std::vector<double>& a, const std::vector<double>& b) const {
        double d = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            const double diff = a[j] - b[j];
            d += diff * diff;
        }
        return std::exp(-gamma * d);
    }

    double predict(const std::vector<double>& raw_features) const {
        const auto q = apply_stats(stats, raw_features);
        double f = bias;
        for (std::size_t i = 0; i < support_rows.size(); ++i)
            f += coefficients[i] * kernel(support_rows[i], q);
        return f;
    }
    double predict(const FeatureRow& row, FeatureSet fs) const {
        return predict(features_of(row, fs));
    }
};

// Dual objective (1/2) beta^T K beta + epsilon sum|beta| - y^T beta, the
// quantity the SMO loop minimizes; shared with the brute-force oracle.
inline double svr_dual_objective(const std::vector<std::vector<double>>& gram,
                                 const std::vector<double>& targets, double epsilon,
                                 const std::vector<double>& beta) {
    const std::size_t n = beta.size();
    double quad = 0.0, reg = 0.0, lin = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) quad += beta[i] * gram[i][j] * beta[j];
        reg += std::abs(beta[i]);
        lin += targets[i] * beta[i];
    }
    return 0.5 * quad + epsilon * reg - lin;
}

// Bandwidth heuristic: 1 / median squared pairwise distance over (at most)
// the first 1000 rows.
inline double default_svr_gamma(const std::vector<std::vector<double>>& std_rows) {
    const std::size_t m = std::min<std::size_t>(std_rows.size(), 1000);
    std::vector<double> d2;
    d2.reserve(m * (m - 1) / 2);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double d = 0.0;
            for (std::size_t k = 0; k < std_rows[i].size(); ++k) {
                const double diff = std_rows[i][k] - std_rows[j][k];
                d += diff * diff;
            }
            d2.push_back(d);
        }
    if (d2.empty()) return 1.0;
    std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(d2.size() / 2), d2.end());
    const double med = d2[d2.size() / 2];
    return med > 0.0 ? 1.0 / med : 1.0;
}

// Solves the epsilon-SVR dual by sequential pairwise optimization on the 2n
// variables (alpha, alpha*), always taking the maximal KKT-violating pair;
// no shrinking. Stops at violating-pair gap <= 1e-3, or returns the current
// iterate with converged = false at the iteration cap.
inline SvrModel fit_svr(const std::vector<std::vector<double>>& rows,
                        const std::vector<double>& targets, double epsilon, double cost,
                        double gamma, long max_iterations = 2000000,
                        FeatureSet fs = FeatureSet::AllVariables) {
    const std::size_t n = rows.size();
    if (n < 2) throw std::invalid_argument("fit_svr: need n >= 2");
    if (epsilon < 0.0 || cost <= 0.0 || gamma <= 0.0)
        throw std::invalid_argument("fit_svr: need epsilon >= 0, cost > 0, gamma > 0");

    SvrModel model;
    model.epsilon = epsilon;
    model.cost = cost;
    model.gamma = gamma;
    model.stats = compute_stats(rows, fs);
    const auto x = apply_stats(model.stats, rows);

    // Full Gram matrix up to n = 10000; beyond that rows are recomputed on
    // demand through a small cache.
    const bool full_gram = n <= 10000;
    std::vector<std::vector<double>> gram;
    std::vector<std::pair<std::size_t, std::vector<double>>> row_cache;
    auto kernel_at = [&](std::size_t i, std::size_t j) {
        double d = 0.0;
        for (std::size_t k = 0; k < x[i].size(); ++k) {
            const double diff = x[i][k] - x[j][k];
            d += diff * diff;
        }
        return std::exp(-gamma * d);
    };
    auto kernel_row = [&](std::size_t i) -> const std::vector<double>& {
        if (full_gram) return gram[i];
        for (auto& [idx, row] : row_cache)
            if (idx == i) return row;
        std::vector<double> row(n);
        for (std::size_t j = 0; j < n; ++j) row[j] = kernel_at(i, j);
        if (row_cache.size() >= 64) row_cache.erase(row_cache.begin());
        row_cache.emplace_back(i, std::move(row));
        return row_cache.back().second;
    };
    if (full_gram) {
        gram.assign(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) gram[i][j] = gram[j][i] = kernel_at(i, j);
    }

    // theta = (alpha, alpha*), z = (+1, -1); beta = alpha - alpha*.
    // Gradients are tracked through ftilde_i = sum_j beta_j K_ij:
    //   -z G for alpha_i slot:  y_i - ftilde_i - epsilon
    //   -z G for alpha*_i slot: y_i - ftilde_i + epsilon
    std::vector<double> alpha(n, 0.0), alpha_star(n, 0.0), ftilde(n, 0.0);
    constexpr double kTol = 1e-3;
    constexpr double kTau = 1e-12;

    long iter = 0;
    double gap = std::numeric_limits<double>::infinity();
    for (; iter < max_iterations; ++iter) {
        // Maximal violating pair over the 2n variables.
        double up_val = -std::numeric_limits<double>::infinity();
        double low_val = std::numeric_limits<double>::infinity();
        std::size_t up_t = 0, low_t = 0; // index into [0, 2n)
        for (std::size_t i = 0; i < n; ++i) {
            const double va = targets[i] - ftilde[i] - epsilon; // alpha slot
            const double vs = targets[i] - ftilde[i] + epsilon; // alpha* slot
            if (alpha[i] < cost && va > up_val) { up_val = va; up_t = i; }
            if (alpha_star[i] > 0.0 && vs > up_val) { up_val = vs; up_t = n + i; }
            if (alpha[i] > 0.0 && va < low_val) { low_val = va; low_t = i; }
            if (alpha_star[i] < cost && vs < low_val) { low_val = vs; low_t = n + i; }
        }
        gap = up_val - low_val;
        if (gap <= kTol) {
            model.converged = true;
            break;
        }

        const std::size_t bi = up_t % n, bj = low_t % n;
        const double q =
            std::max(kernel_at(bi, bi) + kernel_at(bj, bj) - 2.0 * kernel_at(bi, bj), kTau);
        double step = gap / q;

        // Box limits: the up slot moves toward its bound that increases
        // beta_bi, the low slot symmetrically decreases beta_bj.
        const double room_up = up_t < n ? cost - alpha[bi] : alpha_star[bi];
        const double room_low = low_t < n ? alpha[bj] : cost - alpha_star[bj];
        step = std::min({step, room_up, room_low});
        if (step <= 0.0) break; // numerically stuck

        if (up_t < n) alpha[bi] += step; else alpha_star[bi] -= step;
        if (low_t < n) alpha[bj] -= step; else alpha_star[bj] += step;

        const auto& ki = kernel_row(bi);
        const auto& kj = kernel_row(bj);
        for (std::size_t k = 0; k < n; ++k) ftilde[k] += step * (ki[k] - kj[k]);
    }
    model.kkt_gap = gap;

    // Bias from free variables; midpoint of the violating-pair bounds when
    // every variable sits on a box bound.
    double bias_sum = 0.0;
    std::size_t bias_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 0.0 && alpha[i] < cost) {
            bias_sum += targets[i] - ftilde[i] - epsilon;
            ++bias_count;
        }
        if (alpha_star[i] > 0.0 && alpha_star[i] < cost) {
            bias_sum += targets[i] - ftilde[i] + epsilon;
            ++bias_count;
        }
    }
    if (bias_count > 0) {
        model.bias = bias_sum / static_cast<double>(bias_count);
    } else {
        double up_val = -std::numeric_limits<double>::infinity();
        double low_val = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double va = targets[i] - ftilde[i] - epsilon;
            const double vs = targets[i] - ftilde[i] + epsilon;
            if (alpha[i] < cost) up_val = std::max(up_val, va);
            if (alpha_star[i] > 0.0) up_val = std::max(up_val, vs);
            if (alpha[i] > 0.0) low_val = std::min(low_val, va);
            if (alpha_star[i] < cost) low_val = std::min(low_val, vs);
        }
        model.bias = (up_val + low_val) / 2.0;
    }

    std::vector<double> beta(n);
    for (std::size_t i = 0; i < n; ++i) beta[i] = alpha[i] - alpha_star[i];
    if (full_gram) {
        model.dual_objective = svr_dual_objective(gram, targets, epsilon, beta);
    } else {
        double quad = 0.0, reg = 0.0, lin = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            quad += beta[i] * ftilde[i];
            reg += std::abs(beta[i]);
            lin += targets[i] * beta[i];
        }
        model.dual_objective = 0.5 * quad + epsilon * reg - lin;
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (beta[i] != 0.0) {
            model.coefficients.push_back(beta[i]);
            model.support_rows.push_back(x[i]);
        }
    }
    return model;
}

// Grid calibration of the tube width: refit per epsilon, keep the model
// with the lowest validation RMSE (ties to the earlier grid entry).
inline SvrModel calibrate_svr(const std::vector<std::vector<double>>& train_rows,
                              const std::vector<double>& train_targets,
                              const std::vector<std::vector<double>>& validation_rows,
                              const std::vector<double>& validation_targets,
                              const std::vector<double>& epsilon_grid,
                              FeatureSet fs = FeatureSet::AllVariables) {
    if (epsilon_grid.empty()) throw std::invalid_argument("calibrate_svr: empty grid");

    const auto stats = compute_stats(train_rows, fs);
    const double gamma = default_svr_gamma(apply_stats(stats, train_rows));
    double ybar = 0.0;
    for (double y : train_targets) ybar += y;
    ybar /= static_cast<double>(train_targets.size());
    double cost = 0.0;
    for (double y : train_targets) cost = std::max(cost, std::abs(y - ybar));
    if (cost <= 0.0) cost = 1.0;

    SvrModel best;
    double best_rmse = std::numeric_limits<double>::infinity();
    for (double eps : epsilon_grid) {
        SvrModel m = fit_svr(train_rows, train_targets, eps, cost, gamma, 2000000, fs);
        std::vector<double> preds;
        preds.reserve(validation_rows.size());
        for (const auto& row : validation_rows) preds.push_back(m.predict(row));
        const double err = rmse(preds, validation_targets);
        if (err < best_rmse) {
            best_rmse = err;
            best = std::move(m);
        }
    }
    return best;
}

} // namespace windml

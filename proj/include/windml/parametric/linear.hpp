#pragma once

#include <Eigen/Dense>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "windml/pipeline/record.hpp"

namespace windml {

struct LinearModel {
    double intercept = 0.0;           // kW
    std::vector<double> coefficients; // one per explanatory variable
    FeatureSet feature_set = FeatureSet::AllVariables;

    double predict(const std::vector<double>& features) const {
        if (features.size() != coefficients.size())
            throw std::invalid_argument("LinearModel::predict: feature-set mismatch");
        double y = intercept;
        for (std::size_t j = 0; j < features.size(); ++j) y += coefficients[j] * features[j];
        return y;
    }
    double predict(const FeatureRow& row) const { return predict(features_of(row, feature_set)); }
};

// Ordinary least squares via column-pivoted QR. Rank deficiency is reported
// with the offending (dependent) column indices.
inline LinearModel fit_ols(const std::vector<std::vector<double>>& rows,
                           const std::vector<double>& targets, FeatureSet feature_set) {
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto p = static_cast<Eigen::Index>(feature_count(feature_set));
    if (n != static_cast<Eigen::Index>(targets.size()))
        throw std::invalid_argument("fit_ols: rows/targets length mismatch");
    if (n < p + 1) throw std::invalid_argument("fit_ols: need n >= p + 1 rows");

    Eigen::MatrixXd X(n, p + 1);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != p)
            throw std::invalid_argument("fit_ols: row width does not match feature set");
        X(i, 0) = 1.0;
        for (Eigen::Index j = 0; j < p; ++j)
            X(i, j + 1) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        y(i) = targets[static_cast<std::size_t>(i)];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p + 1) {
        const auto perm = qr.colsPermutation().indices();
        std::ostringstream msg;
        msg << "fit_ols: rank-deficient design matrix; dependent columns:";
        for (Eigen::Index k = qr.rank(); k < p + 1; ++k) msg << ' ' << perm(k);
        throw std::invalid_argument(msg.str());
    }
    const Eigen::VectorXd beta = qr.solve(y);

    LinearModel model;
    model.feature_set = feature_set;
    model.intercept = beta(0);
    model.coefficients.assign(beta.data() + 1, beta.data() + p + 1);
    return model;
}

} // namespace windml

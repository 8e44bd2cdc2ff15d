#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "windml/parametric/linear.hpp"
#include "windml/pipeline/record.hpp"

namespace windml {

enum class SigmoidVariant { Logistic, PolynomialLogistic };

struct FitReport {
    double objective = 0.0;     // residual sum of squares at the solution
    int iterations = 0;
    bool converged = false;
    double gradient_norm = 0.0;
};

// Scaled sigmoid power-curve model: y = C / (1 + exp(eta)). The sign
// convention keeps +eta in the denominator, so increasing power curves get
// negative wind coefficients. The polynomial variant replaces the linear
// wind term with a cubic in wind speed; all other variables stay linear.
struct SigmoidModel {
    double amplitude = 1.0;            // C, kW
    std::vector<double> linear_coeffs; // a0, then one per linear feature
    std::vector<double> poly_coeffs;   // w, w^2, w^3 terms (polynomial variant only)
    SigmoidVariant variant = SigmoidVariant::Logistic;
    FeatureSet feature_set = FeatureSet::AllVariables;

    // Linear features are all explanatory variables for the plain logistic
    // variant, and everything except wind speed for the polynomial one.
    static int linear_feature_count(SigmoidVariant v, FeatureSet fs) {
        const int p = feature_count(fs);
        return v == SigmoidVariant::Logistic ? p : p - 1;
    }

    double eta(const std::vector<double>& features) const {
        double e = linear_coeffs[0];
        if (variant == SigmoidVariant::Logistic) {
            for (std::size_t j = 0; j < features.size(); ++j) e += linear_coeffs[j + 1] * features[j];
        } else {
            const double w = features[0];
            e += poly_coeffs[0] * w + poly_coeffs[1] * w * w + poly_coeffs[2] * w * w * w;
            for (std::size_t j = 1; j < features.size(); ++j) e += linear_coeffs[j] * features[j];
        }
        return e;
    }

    double predict(const std::vector<double>& features) const {
        if (static_cast<int>(features.size()) != feature_count(feature_set))
            throw std::invalid_argument("SigmoidModel::predict: feature-set mismatch");
        return amplitude / (1.0 + std::exp(eta(features)));
    }
    double predict(const FeatureRow& row) const { return predict(features_of(row, feature_set)); }
};

namespace detail {

inline int sigmoid_param_count(SigmoidVariant v, FeatureSet fs) {
    // C, a0, linear coefficients, plus the 3 cubic terms for the poly variant.
    return 2 + SigmoidModel::linear_feature_count(v, fs) + (v == SigmoidVariant::PolynomialLogistic ? 3 : 0);
}

inline Eigen::VectorXd pack_sigmoid(const SigmoidModel& m) {
    Eigen::VectorXd theta(sigmoid_param_count(m.variant, m.feature_set));
    int k = 0;
    theta(k++) = m.amplitude;
    for (double c : m.linear_coeffs) theta(k++) = c;
    for (double c : m.poly_coeffs) theta(k++) = c;
    return theta;
}

inline SigmoidModel unpack_sigmoid(const Eigen::VectorXd& theta, SigmoidVariant v, FeatureSet fs) {
    SigmoidModel m;
    m.variant = v;
    m.feature_set = fs;
    int k = 0;
    m.amplitude = theta(k++);
    m.linear_coeffs.resize(static_cast<std::size_t>(1 + SigmoidModel::linear_feature_count(v, fs)));
    for (double& c : m.linear_coeffs) c = theta(k++);
    if (v == SigmoidVariant::PolynomialLogistic) {
        m.poly_coeffs.resize(3);
        for (double& c : m.poly_coeffs) c = theta(k++);
    }
    return m;
}

// Residuals r_i = y_i - C s(eta_i) and Jacobian of predictions, with
// s = 1/(1+exp(eta)): d yhat/dC = s, d yhat/d a_k = -C s (1-s) x_k.
inline void sigmoid_residuals_jacobian(const Eigen::VectorXd& theta,
                                       const std::vector<std::vector<double>>& rows,
                                       const std::vector<double>& targets, SigmoidVariant v,
                                       FeatureSet fs, Eigen::VectorXd& r, Eigen::MatrixXd& J) {
    const SigmoidModel m = unpack_sigmoid(theta, v, fs);
    const auto n = static_cast<Eigen::Index>(rows.size());
    const auto np = theta.size();
    r.resize(n);
    J.resize(n, np);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& x = rows[static_cast<std::size_t>(i)];
        const double e = m.eta(x);
        const double s = 1.0 / (1.0 + std::exp(e));
        r(i) = targets[static_cast<std::size_t>(i)] - m.amplitude * s;
        const double d = -m.amplitude * s * (1.0 - s); // common factor for all eta coefficients
        int k = 0;
        J(i, k++) = s;
        J(i, k++) = d; // a0
        if (v == SigmoidVariant::Logistic) {
            for (double xj : x) J(i, k++) = d * xj;
        } else {
            for (std::size_t j = 1; j < x.size(); ++j) J(i, k++) = d * x[j];
            const double w = x[0];
            J(i, k++) = d * w;
            J(i, k++) = d * w * w;
            J(i, k++) = d * w * w * w;
        }
    }
}

} // namespace detail

// Least-squares objective sum (y - C/(1+exp(eta)))^2 over flat parameters
// [C, a0, linear..., poly...]. Exposed so the analytic gradient can be
// checked against finite differences.
inline double sigmoid_objective(const Eigen::VectorXd& theta,
                                const std::vector<std::vector<double>>& rows,
                                const std::vector<double>& targets, SigmoidVariant v,
                                FeatureSet fs) {
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    detail::sigmoid_residuals_jacobian(theta, rows, targets, v, fs, r, J);
    return r.squaredNorm();
}

inline Eigen::VectorXd sigmoid_gradient(const Eigen::VectorXd& theta,
                                        const std::vector<std::vector<double>>& rows,
                                        const std::vector<double>& targets, SigmoidVariant v,
                                        FeatureSet fs) {
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    detail::sigmoid_residuals_jacobian(theta, rows, targets, v, fs, r, J);
    return -2.0 * J.transpose() * r;
}

// Damped Gauss-Newton (Levenberg-Marquardt style) fit of the scaled sigmoid.
// Deterministic initialization: C0 = 1.05 max(y), linear terms from OLS on
// the logit of clipped targets, cubic terms starting at 0. Non-convergence
// returns the best model with converged = false; the caller decides.
inline std::pair<SigmoidModel, FitReport> fit_sigmoid(const std::vector<std::vector<double>>& rows,
                                                      const std::vector<double>& targets,
                                                      SigmoidVariant variant,
                                                      FeatureSet feature_set,
                                                      int max_iterations = 500) {
    const int np = detail::sigmoid_param_count(variant, feature_set);
    if (static_cast<int>(rows.size()) < np + 1)
        throw std::invalid_argument("fit_sigmoid: need n >= parameter count + 1");
    const double ymax = *std::max_element(targets.begin(), targets.end());
    if (!(ymax > 0.0)) throw std::invalid_argument("fit_sigmoid: max target must be > 0");

    // Initial parameters via OLS on eta = log(C0/y - 1).
    const double c0 = 1.05 * ymax;
    std::vector<double> z(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const double yc = std::clamp(targets[i], 0.01 * c0, 0.99 * c0);
        z[i] = std::log(c0 / yc - 1.0);
    }
    const LinearModel init = fit_ols(rows, z, feature_set);

    SigmoidModel m;
    m.variant = variant;
    m.feature_set = feature_set;
    m.amplitude = c0;
    if (variant == SigmoidVariant::Logistic) {
        m.linear_coeffs.push_back(init.intercept);
        for (double c : init.coefficients) m.linear_coeffs.push_back(c);
    } else {
        m.linear_coeffs.push_back(init.intercept);
        for (std::size_t j = 1; j < init.coefficients.size(); ++j)
            m.linear_coeffs.push_back(init.coefficients[j]);
        m.poly_coeffs = {init.coefficients[0], 0.0, 0.0};
    }

    Eigen::VectorXd theta = detail::pack_sigmoid(m);
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    detail::sigmoid_residuals_jacobian(theta, rows, targets, variant, feature_set, r, J);
    double objective = r.squaredNorm();

    FitReport report;
    double damping = 1e-3;
    constexpr double kRelTol = 1e-10;
    constexpr double kGradTol = 1e-8;

    int iter = 0;
    for (; iter < max_iterations; ++iter) {
        const Eigen::MatrixXd JtJ = J.transpose() * J;
        const Eigen::VectorXd Jtr = J.transpose() * r;
        report.gradient_norm = 2.0 * Jtr.norm();
        if (report.gradient_norm < kGradTol) {
            report.converged = true;
            break;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 32 && !accepted; ++attempt) {
            Eigen::MatrixXd A = JtJ;
            for (Eigen::Index k = 0; k < A.rows(); ++k)
                A(k, k) += damping * std::max(JtJ(k, k), 1e-12);
            const Eigen::VectorXd step = A.ldlt().solve(Jtr);
            const Eigen::VectorXd candidate = theta + step;
            const double cand_obj =
                sigmoid_objective(candidate, rows, targets, variant, feature_set);
            if (std::isfinite(cand_obj) && cand_obj < objective) {
                const double rel_decrease = (objective - cand_obj) / std::max(objective, 1e-300);
                theta = candidate;
                objective = cand_obj;
                damping = std::max(damping / 3.0, 1e-12);
                accepted = true;
                detail::sigmoid_residuals_jacobian(theta, rows, targets, variant, feature_set, r, J);
                if (rel_decrease < kRelTol) {
                    report.converged = true;
                    ++iter;
                    goto done;
                }
            } else {
                damping *= 4.0;
            }
        }
        if (!accepted) {
            // No damping level yields a decrease: the relative decrease is
            // zero, which satisfies the objective-decrease criterion.
            report.converged = true;
            break;
        }
    }
done:
    report.iterations = iter;
    report.objective = objective;
    report.gradient_norm =
        sigmoid_gradient(theta, rows, targets, variant, feature_set).norm();
    return {detail::unpack_sigmoid(theta, variant, feature_set), report};
}

} // namespace windml

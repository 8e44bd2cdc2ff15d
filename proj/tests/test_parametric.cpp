#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "windml/common/rng.hpp"
#include "windml/parametric/lasso.hpp"
#include "windml/parametric/linear.hpp"
#include "windml/parametric/sigmoid.hpp"

using namespace windml;

namespace {

// Independent OLS oracle: normal equations solved by Gaussian elimination
// with partial pivoting, no shared code with the library solver.
std::vector<double> ols_normal_equations(const std::vector<std::vector<double>>& rows,
                                         const std::vector<double>& y) {
    const std::size_t n = rows.size();
    const std::size_t p = rows.front().size() + 1; // intercept first
    std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> xi(p);
        xi[0] = 1.0;
        for (std::size_t j = 1; j < p; ++j) xi[j] = rows[i][j - 1];
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = 0; c < p; ++c) a[r][c] += xi[r] * xi[c];
            a[r][p] += xi[r] * y[i];
        }
    }
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < p; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c <= p; ++c) a[r][c] -= f * a[col][c];
        }
    }
    std::vector<double> beta(p);
    for (std::size_t r = 0; r < p; ++r) beta[r] = a[r][p] / a[r][r];
    return beta;
}

std::vector<std::vector<double>> random_rows(Rng& rng, int n, int p, double scale = 5.0) {
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < n; ++i) {
        std::vector<double> r;
        for (int j = 0; j < p; ++j) r.push_back((rng.uniform01() - 0.5) * 2.0 * scale);
        rows.push_back(r);
    }
    return rows;
}

} // namespace

TEST_CASE("fit_ols matches the normal-equations oracle") {
    Rng rng(21);
    for (int rep = 0; rep < 20; ++rep) {
        const auto rows = random_rows(rng, 60, 7);
        std::vector<double> y;
        for (const auto& r : rows) {
            double v = 3.0 + rng.normal();
            for (std::size_t j = 0; j < r.size(); ++j) v += (static_cast<double>(j) - 2.0) * r[j];
            y.push_back(v);
        }
        const auto model = fit_ols(rows, y, FeatureSet::AllVariables);
        const auto oracle = ols_normal_equations(rows, y);
        REQUIRE(model.intercept == Catch::Approx(oracle[0]).margin(1e-8));
        for (std::size_t j = 0; j < 7; ++j)
            REQUIRE(model.coefficients[j] == Catch::Approx(oracle[j + 1]).margin(1e-8));
    }
}

TEST_CASE("ols shifting the target shifts only the intercept") {
    Rng rng(22);
    const auto rows = random_rows(rng, 50, 7);
    std::vector<double> y;
    for (const auto& r : rows) y.push_back(r[0] * 2.0 + rng.normal());
    const auto base = fit_ols(rows, y, FeatureSet::AllVariables);
    std::vector<double> y_shift(y);
    for (double& v : y_shift) v += 123.0;
    const auto shifted = fit_ols(rows, y_shift, FeatureSet::AllVariables);
    REQUIRE(shifted.intercept == Catch::Approx(base.intercept + 123.0).margin(1e-8));
    for (std::size_t j = 0; j < 7; ++j)
        REQUIRE(shifted.coefficients[j] == Catch::Approx(base.coefficients[j]).margin(1e-8));
}

TEST_CASE("ols reports rank deficiency with dependent columns") {
    Rng rng(23);
    auto rows = random_rows(rng, 40, 7);
    for (auto& r : rows) r[6] = 2.0 * r[0]; // exact collinearity
    std::vector<double> y;
    for (const auto& r : rows) y.push_back(r[1]);
    REQUIRE_THROWS_WITH(fit_ols(rows, y, FeatureSet::AllVariables),
                        Catch::Matchers::ContainsSubstring("rank-deficient"));
}

TEST_CASE("ols validates input shapes") {
    Rng rng(24);
    const auto rows = random_rows(rng, 5, 7);
    std::vector<double> y(5, 1.0);
    REQUIRE_THROWS_AS(fit_ols(rows, y, FeatureSet::AllVariables), std::invalid_argument);
    REQUIRE_THROWS_AS(fit_ols(rows, std::vector<double>(4, 1.0), FeatureSet::WindOnly),
                      std::invalid_argument);
}

TEST_CASE("sigmoid fit recovers a generating logistic model") {
    Rng rng(25);
    SigmoidModel truth;
    truth.variant = SigmoidVariant::Logistic;
    truth.feature_set = FeatureSet::WindOnly;
    truth.amplitude = 2000.0;
    truth.linear_coeffs = {6.0, -0.8}; // increasing power curve in wind speed
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 400; ++i) {
        const double w = rng.uniform01() * 20.0;
        rows.push_back({w});
        y.push_back(truth.predict(std::vector<double>{w}));
    }
    const auto [fit, report] = fit_sigmoid(rows, y, SigmoidVariant::Logistic, FeatureSet::WindOnly);
    REQUIRE(report.converged);
    for (const auto& r : rows)
        REQUIRE(fit.predict(r) == Catch::Approx(truth.predict(r)).margin(1e-3));
}

TEST_CASE("polynomial sigmoid fit beats the plain logistic on a cubic curve") {
    Rng rng(26);
    std::vector<std::vector<double>> rows;
    std::vector<double> y;
    for (int i = 0; i < 500; ++i) {
        const double w = rng.uniform01() * 18.0;
        rows.push_back({w});
        // Sharper-than-logistic transition generated through a cubic eta.
        const double eta = 8.0 - 0.05 * w - 0.002 * w * w - 0.006 * w * w * w;
        y.push_back(1900.0 / (1.0 + std::exp(eta)) + 2.0 * rng.normal());
    }
    const auto [logi, rep1] = fit_sigmoid(rows, y, SigmoidVariant::Logistic, FeatureSet::WindOnly);
    const auto [poly, rep2] =
        fit_sigmoid(rows, y, SigmoidVariant::PolynomialLogistic, FeatureSet::WindOnly);
    REQUIRE(rep2.objective <= rep1.objective + 1e-9);
}

TEST_CASE("sigmoid gradient matches central finite differences") {
    Rng rng(27);
    const auto rows = random_rows(rng, 30, 7, 2.0);
    std::vector<double> y;
    for (int i = 0; i < 30; ++i) y.push_back(200.0 + 100.0 * rng.uniform01());

    for (const auto variant : {SigmoidVariant::Logistic, SigmoidVariant::PolynomialLogistic}) {
        const int np = detail::sigmoid_param_count(variant, FeatureSet::AllVariables);
        Eigen::VectorXd theta(np);
        theta(0) = 500.0 + 100.0 * rng.uniform01();
        for (int k = 1; k < np; ++k) theta(k) = rng.uniform01() - 0.5;

        const Eigen::VectorXd g =
            sigmoid_gradient(theta, rows, y, variant, FeatureSet::AllVariables);
        for (int k = 0; k < np; ++k) {
            const double h = 1e-6 * std::max(1.0, std::abs(theta(k)));
            Eigen::VectorXd tp = theta, tm = theta;
            tp(k) += h;
            tm(k) -= h;
            const double num = (sigmoid_objective(tp, rows, y, variant, FeatureSet::AllVariables) -
                                sigmoid_objective(tm, rows, y, variant, FeatureSet::AllVariables)) /
                               (2.0 * h);
            const double denom = std::max({std::abs(num), std::abs(g(k)), 1e-8});
            REQUIRE(std::abs(num - g(k)) / denom < 1e-5);
        }
    }
}

TEST_CASE("lasso at lambda 0 matches ols") {
    Rng rng(28);
    const auto rows = random_rows(rng, 200, 7);
    std::vector<double> y;
    for (const auto& r : rows) y.push_back(10.0 + 3.0 * r[0] - 2.0 * r[4] + 0.1 * rng.normal());
    const auto lasso = fit_lasso_at(rows, y, 0.0, FeatureSet::AllVariables);
    const auto ols = fit_ols(rows, y, FeatureSet::AllVariables);
    REQUIRE(lasso.intercept == Catch::Approx(ols.intercept).margin(1e-6));
    for (std::size_t j = 0; j < 7; ++j)
        REQUIRE(lasso.coefficients[j] == Catch::Approx(ols.coefficients[j]).margin(1e-6));
}

TEST_CASE("lasso at lambda_max zeroes every slope exactly") {
    Rng rng(29);
    const auto rows = random_rows(rng, 100, 7);
    std::vector<double> y;
    for (const auto& r : rows) y.push_back(5.0 + r[2] + rng.normal());

    const auto stats = compute_stats(rows);
    const auto x_std = apply_stats(stats, rows);
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    std::vector<double> yc;
    for (double v : y) yc.push_back(v - ybar);
    const double lmax = lasso_lambda_max(x_std, yc);

    for (const double lambda : {lmax, 1.5 * lmax}) {
        const auto model = fit_lasso_at(rows, y, lambda, FeatureSet::AllVariables);
        for (double c : model.coefficients) REQUIRE(c == 0.0);
        REQUIRE(model.intercept == Catch::Approx(ybar));
    }
}

TEST_CASE("lasso l1 norm grows monotonically as lambda decreases") {
    Rng rng(30);
    const auto rows = random_rows(rng, 120, 7);
    std::vector<double> y;
    for (const auto& r : rows) y.push_back(2.0 * r[0] - r[3] + 0.5 * r[5] + 0.2 * rng.normal());

    const auto stats = compute_stats(rows);
    const auto x_std = apply_stats(stats, rows);
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    std::vector<double> yc;
    for (double v : y) yc.push_back(v - ybar);

    const auto grid = default_lambda_grid(lasso_lambda_max(x_std, yc));
    REQUIRE(grid.size() == 50);
    REQUIRE(grid.back() == Catch::Approx(1e-4 * grid.front()));
    double prev_l1 = -1.0;
    for (double lambda : grid) {
        const auto model = fit_lasso_at(rows, y, lambda, FeatureSet::AllVariables);
        double l1 = 0.0;
        // Compare in standardized units where the penalty acts.
        for (std::size_t j = 0; j < 7; ++j) l1 += std::abs(model.coefficients[j] * stats.sds[j]);
        REQUIRE(l1 >= prev_l1 - 1e-7);
        prev_l1 = l1;
    }
}

TEST_CASE("cross-validated lasso keeps the informative variables") {
    Rng rng(31);
    const auto rows = random_rows(rng, 300, 7);
    std::vector<double> y;
    for (const auto& r : rows) y.push_back(4.0 * r[0] + 0.05 * rng.normal());

    const auto stats = compute_stats(rows);
    const auto x_std = apply_stats(stats, rows);
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    std::vector<double> yc;
    for (double v : y) yc.push_back(v - ybar);

    const auto model = fit_lasso(rows, y, default_lambda_grid(lasso_lambda_max(x_std, yc)), 5,
                                 FeatureSet::AllVariables);
    REQUIRE(model.coefficients[0] == Catch::Approx(4.0).margin(0.05));
}

TEST_CASE("lasso validates its inputs") {
    Rng rng(32);
    const auto rows = random_rows(rng, 20, 7);
    const std::vector<double> y(20, 1.0);
    REQUIRE_THROWS_AS(fit_lasso(rows, y, {}, 5, FeatureSet::AllVariables), std::invalid_argument);
    REQUIRE_THROWS_AS(fit_lasso(rows, y, {1.0, 2.0}, 5, FeatureSet::AllVariables),
                      std::invalid_argument); // ascending grid
    REQUIRE_THROWS_AS(fit_lasso(rows, y, {2.0, 1.0}, 1, FeatureSet::AllVariables),
                      std::invalid_argument); // cv_folds < 2
}

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "windml/common/rng.hpp"
#include "windml/common/stats.hpp"
#include "windml/ensemble/forest.hpp"
#include "windml/ensemble/prune.hpp"
#include "windml/eval/baselines.hpp"
#include "windml/eval/metrics.hpp"
#include "windml/eval/split.hpp"
#include "windml/neighbors/knn.hpp"
#include "windml/neighbors/svr.hpp"
#include "windml/parametric/lasso.hpp"
#include "windml/parametric/linear.hpp"
#include "windml/parametric/sigmoid.hpp"
#include "windml/pipeline/standardize.hpp"
#include "windml/pipeline/virtual_sensor.hpp"

namespace windml {

enum class InputMode { LocalSensors, VirtualAverage };

inline std::string to_string(InputMode m) {
    return m == InputMode::LocalSensors ? "local" : "virtual_average";
}

enum class Method {
    Persistence,
    Linear,
    Logistic,
    PolynomialLogistic,
    Lasso,
    Cart,
    Bagging,
    RandomForest,
    Svr,
    Knn,
    PowerCurve,
};

inline std::string to_string(Method m) {
    switch (m) {
        case Method::Persistence: return "persistence";
        case Method::Linear: return "linear";
        case Method::Logistic: return "logistic";
        case Method::PolynomialLogistic: return "polynomial_logistic";
        case Method::Lasso: return "lasso";
        case Method::Cart: return "cart";
        case Method::Bagging: return "bagging";
        case Method::RandomForest: return "random_forest";
        case Method::Svr: return "svr";
        case Method::Knn: return "knn";
        default: return "power_curve";
    }
}

inline std::optional<Method> method_from_string(const std::string& s) {
    static const std::map<std::string, Method> table = {
        {"persistence", Method::Persistence},
        {"linear", Method::Linear},
        {"logistic", Method::Logistic},
        {"polynomial_logistic", Method::PolynomialLogistic},
        {"lasso", Method::Lasso},
        {"cart", Method::Cart},
        {"bagging", Method::Bagging},
        {"random_forest", Method::RandomForest},
        {"svr", Method::Svr},
        {"knn", Method::Knn},
        {"power_curve", Method::PowerCurve},
    };
    const auto it = table.find(s);
    if (it == table.end()) return std::nullopt;
    return it->second;
}

// One benchmark run unit: a method, its hyperparameters, and the feature
// set it consumes.
struct MethodSpec {
    Method method = Method::Linear;
    FeatureSet feature_set = FeatureSet::AllVariables;
    std::uint64_t seed = 0;

    // Ensembles. mtry = -1 means the method default: p for bagging,
    // floor(p/3) for random forests.
    int b = 500;
    int mtry = -1;
    int min_node_size = 5;
    bool prune_cart = true;
    int cv_folds = 10;
    int jobs = 1;

    // Grid-calibrated methods. Empty grids mean defaults: k in 1..20,
    // epsilon in {0.01, 0.05, 0.1, 0.2, 0.5} * sd(y).
    std::vector<int> k_grid;
    std::vector<double> epsilon_grid;
    int lasso_cv_folds = 5;

    std::optional<PowerCurve> curve; // required by the power_curve method
};

// Per-turbine fitted predictors plus run tags. Persistence never appears
// here; it is a farm-total baseline handled directly by evaluate().
struct FarmModel {
    Method method = Method::Linear;
    FeatureSet feature_set = FeatureSet::AllVariables;
    InputMode mode = InputMode::LocalSensors;
    std::vector<std::string> turbine_ids;
    std::vector<std::function<double(const FeatureRow&)>> predictors;
};

struct EvalReport {
    std::string method_name;
    FeatureSet feature_set = FeatureSet::AllVariables;
    InputMode mode = InputMode::LocalSensors;
    std::vector<double> block_rmse; // kW, one per test block
    double mean_rmse = 0.0;
    std::optional<double> sd_rmse; // absent with a single block
    double pct_ip = 0.0;
};

namespace detail {

inline std::function<double(const FeatureRow&)> fit_turbine_model(
    const MethodSpec& spec, const std::vector<std::vector<double>>& x,
    const std::vector<double>& y, std::uint64_t turbine_seed) {
    const FeatureSet fs = spec.feature_set;
    const int p = feature_count(fs);
    switch (spec.method) {
        case Method::Linear: {
            auto model = std::make_shared<LinearModel>(fit_ols(x, y, fs));
            return [model](const FeatureRow& r) { return model->predict(r); };
        }
        case Method::Logistic:
        case Method::PolynomialLogistic: {
            const auto variant = spec.method == Method::Logistic
                                     ? SigmoidVariant::Logistic
                                     : SigmoidVariant::PolynomialLogistic;
            auto model = std::make_shared<SigmoidModel>(fit_sigmoid(x, y, variant, fs).first);
            return [model](const FeatureRow& r) { return model->predict(r); };
        }
        case Method::Lasso: {
            const auto stats = compute_stats(x, fs);
            const auto x_std = apply_stats(stats, x);
            double ybar = 0.0;
            for (double v : y) ybar += v;
            ybar /= static_cast<double>(y.size());
            std::vector<double> yc(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) yc[i] = y[i] - ybar;
            const auto grid = default_lambda_grid(lasso_lambda_max(x_std, yc));
            auto model = std::make_shared<LinearModel>(
                fit_lasso(x, y, grid, spec.lasso_cv_folds, fs));
            return [model](const FeatureRow& r) { return model->predict(r); };
        }
        case Method::Cart: {
            TreeParams params;
            params.min_node_size = spec.min_node_size;
            Rng rng(0);
            RegressionTree tree = grow_tree(x, y, params, all_features_sampler(p), rng);
            if (spec.prune_cart) tree = prune_tree(tree, x, y, spec.cv_folds, params);
            auto model = std::make_shared<RegressionTree>(std::move(tree));
            return [model, fs](const FeatureRow& r) { return model->predict(features_of(r, fs)); };
        }
        case Method::Bagging:
        case Method::RandomForest: {
            const int mtry = spec.mtry > 0 ? spec.mtry
                             : spec.method == Method::Bagging ? p
                                                              : std::max(1, p / 3);
            TreeParams params;
            params.min_node_size = spec.min_node_size;
            auto model = std::make_shared<Forest>(
                fit_forest(x, y, spec.b, mtry, true, turbine_seed, params, spec.jobs));
            return [model, fs](const FeatureRow& r) { return model->predict(features_of(r, fs)); };
        }
        case Method::Knn: {
            // Hyperparameter from the temporal tail of the training range,
            // final fit on the full training range.
            const std::size_t cut = x.size() - x.size() / 5;
            std::vector<std::vector<double>> tr(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(cut));
            std::vector<double> try_(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(cut));
            std::vector<std::vector<double>> va(x.begin() + static_cast<std::ptrdiff_t>(cut), x.end());
            std::vector<double> vay(y.begin() + static_cast<std::ptrdiff_t>(cut), y.end());
            std::vector<int> grid = spec.k_grid;
            if (grid.empty())
                for (int k = 1; k <= 20; ++k) grid.push_back(k);
            for (int& k : grid) k = std::min<int>(k, static_cast<int>(tr.size()));
            const int k = select_k(tr, try_, va, vay, grid, fs);
            auto model = std::make_shared<KnnModel>(fit_knn(x, y, k, fs));
            return [model, fs](const FeatureRow& r) { return model->predict(features_of(r, fs)); };
        }
        case Method::Svr: {
            const std::size_t cut = x.size() - x.size() / 5;
            std::vector<std::vector<double>> tr(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(cut));
            std::vector<double> try_(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(cut));
            std::vector<std::vector<double>> va(x.begin() + static_cast<std::ptrdiff_t>(cut), x.end());
            std::vector<double> vay(y.begin() + static_cast<std::ptrdiff_t>(cut), y.end());
            std::vector<double> grid = spec.epsilon_grid;
            if (grid.empty()) {
                const double sd = sample_sd(y);
                grid = {0.01 * sd, 0.05 * sd, 0.1 * sd, 0.2 * sd, 0.5 * sd};
            }
            auto model = std::make_shared<SvrModel>(calibrate_svr(tr, try_, va, vay, grid, fs));
            return [model, fs](const FeatureRow& r) { return model->predict(features_of(r, fs)); };
        }
        case Method::PowerCurve: {
            if (!spec.curve) throw std::invalid_argument("power_curve method requires a curve");
            const PowerCurve curve = *spec.curve;
            curve.validate();
            return [curve](const FeatureRow& r) { return power_curve_predict(curve, r.w); };
        }
        default:
            throw std::invalid_argument("fit_turbine_model: persistence has no per-turbine model");
    }
}

} // namespace detail

// Fits one model per turbine. In VirtualAverage mode every model is trained
// on the farm-averaged features while targets stay per-turbine; evaluation
// then feeds the averaged test features to every turbine's model.
inline FarmModel fit_farm(const MethodSpec& spec, const std::vector<TurbineDataset>& farm_train,
                          InputMode mode) {
    if (farm_train.empty()) throw std::invalid_argument("fit_farm: empty farm");
    for (const auto& t : farm_train)
        if (t.rows.empty())
            throw std::invalid_argument("fit_farm: turbine '" + t.turbine_id + "' has no rows");

    FarmModel model;
    model.method = spec.method;
    model.feature_set = spec.feature_set;
    model.mode = mode;

    std::optional<TurbineDataset> averaged;
    if (mode == InputMode::VirtualAverage) averaged = virtual_sensor_average(farm_train);

    for (std::size_t i = 0; i < farm_train.size(); ++i) {
        const TurbineDataset& src = mode == InputMode::LocalSensors ? farm_train[i] : *averaged;
        const auto x = feature_matrix(src, spec.feature_set);
        const auto y = target_vector(farm_train[i]); // targets always per-turbine
        const std::uint64_t turbine_seed = Rng::stream(spec.seed, 1000 + i).next_u64();
        try {
            model.predictors.push_back(detail::fit_turbine_model(spec, x, y, turbine_seed));
        } catch (const std::exception& e) {
            throw std::runtime_error("fit_farm: turbine '" + farm_train[i].turbine_id +
                                     "': " + e.what());
        }
        model.turbine_ids.push_back(farm_train[i].turbine_id);
    }
    return model;
}

// Farm power per instant: the sum of per-turbine predictions. Rows are
// per-turbine in LocalSensors mode; in VirtualAverage mode every turbine's
// model sees the same averaged row, so callers pass that row for each
// turbine slot.
inline std::vector<double> farm_predict(const FarmModel& model,
                                        const std::vector<std::vector<FeatureRow>>& test_rows) {
    if (test_rows.size() != model.predictors.size())
        throw std::invalid_argument("farm_predict: turbine count mismatch");
    const std::size_t n = test_rows.front().size();
    for (const auto& rows : test_rows) {
        if (rows.size() != n) throw std::invalid_argument("farm_predict: misaligned row counts");
        for (std::size_t t = 0; t < n; ++t)
            if (rows[t].timestamp != test_rows.front()[t].timestamp)
                throw std::invalid_argument("farm_predict: misaligned timestamps");
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < model.predictors.size(); ++i)
        for (std::size_t t = 0; t < n; ++t) out[t] += model.predictors[i](test_rows[i][t]);
    return out;
}

// Keeps only timestamps present in every turbine dataset.
inline std::vector<TurbineDataset> align_farm(const std::vector<TurbineDataset>& farm) {
    if (farm.empty()) throw std::invalid_argument("align_farm: empty farm");
    std::map<Timestamp, std::size_t> counts;
    for (const auto& t : farm)
        for (const auto& r : t.rows) ++counts[r.timestamp];
    std::vector<TurbineDataset> out;
    for (const auto& t : farm) {
        TurbineDataset kept;
        kept.turbine_id = t.turbine_id;
        for (const auto& r : t.rows)
            if (counts[r.timestamp] == farm.size()) kept.rows.push_back(r);
        out.push_back(std::move(kept));
    }
    return out;
}

// The full benchmark protocol for one method: fit on the training range,
// farm RMSE per test block, mean / sd (n-1) / % of installed power. The
// farm must be timestamp-aligned (see align_farm).
inline EvalReport evaluate(const MethodSpec& spec, const std::vector<TurbineDataset>& farm,
                           const SplitPlan& plan, InputMode mode,
                           double rated_per_turbine_kw = 2050.0) {
    if (farm.empty()) throw std::invalid_argument("evaluate: empty farm");
    const std::size_t n = farm.front().rows.size();
    for (const auto& t : farm) {
        if (t.rows.size() != n) throw std::invalid_argument("evaluate: farm not aligned");
        for (std::size_t i = 0; i < n; ++i)
            if (t.rows[i].timestamp != farm.front().rows[i].timestamp)
                throw std::invalid_argument("evaluate: farm not aligned");
    }
    if (plan.test_blocks.empty()) throw std::invalid_argument("evaluate: no test blocks");
    for (const auto& blk : plan.test_blocks)
        if (blk.end > n) throw std::invalid_argument("evaluate: plan exceeds data");

    std::vector<double> totals(n, 0.0);
    for (const auto& t : farm)
        for (std::size_t i = 0; i < n; ++i) totals[i] += t.rows[i].y;

    EvalReport report;
    report.method_name = to_string(spec.method);
    report.feature_set = spec.feature_set;
    report.mode = mode;

    if (spec.method == Method::Persistence) {
        // Farm-total baseline: no per-turbine fit, the previous observed
        // farm output is the prediction.
        for (const auto& blk : plan.test_blocks) {
            std::vector<double> preds, obs;
            for (std::size_t t = blk.begin; t < blk.end; ++t) {
                preds.push_back(totals[t - 1]);
                obs.push_back(totals[t]);
            }
            report.block_rmse.push_back(rmse(preds, obs));
        }
    } else {
        std::vector<TurbineDataset> train(farm.size());
        for (std::size_t i = 0; i < farm.size(); ++i) {
            train[i].turbine_id = farm[i].turbine_id;
            train[i].rows.assign(farm[i].rows.begin() + static_cast<std::ptrdiff_t>(plan.training.begin),
                                 farm[i].rows.begin() + static_cast<std::ptrdiff_t>(plan.training.end));
        }
        const FarmModel model = fit_farm(spec, train, mode);

        std::optional<TurbineDataset> averaged;
        if (mode == InputMode::VirtualAverage) averaged = virtual_sensor_average(farm);

        for (const auto& blk : plan.test_blocks) {
            std::vector<std::vector<FeatureRow>> block_rows(farm.size());
            for (std::size_t i = 0; i < farm.size(); ++i) {
                const auto& src = mode == InputMode::LocalSensors ? farm[i].rows : averaged->rows;
                block_rows[i].assign(src.begin() + static_cast<std::ptrdiff_t>(blk.begin),
                                     src.begin() + static_cast<std::ptrdiff_t>(blk.end));
            }
            const auto preds = farm_predict(model, block_rows);
            const std::vector<double> obs(totals.begin() + static_cast<std::ptrdiff_t>(blk.begin),
                                          totals.begin() + static_cast<std::ptrdiff_t>(blk.end));
            report.block_rmse.push_back(rmse(preds, obs));
        }
    }

    report.mean_rmse = mean(report.block_rmse);
    if (report.block_rmse.size() >= 2) report.sd_rmse = sample_sd(report.block_rmse);
    report.pct_ip = pct_installed_power(report.mean_rmse, static_cast<int>(farm.size()),
                                        rated_per_turbine_kw);
    return report;
}

} // namespace windml

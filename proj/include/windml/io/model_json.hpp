#pragma once

#include <json.hpp>
#include <stdexcept>
#include <string>

#include "windml/ensemble/forest.hpp"
#include "windml/eval/baselines.hpp"
#include "windml/neighbors/knn.hpp"
#include "windml/neighbors/svr.hpp"
#include "windml/parametric/linear.hpp"
#include "windml/parametric/sigmoid.hpp"

namespace windml {

// JSON model schema, version 1. Every document carries {"schema_version",
// "model", "feature_set"} plus per-model parameters. Doubles round-trip
// exactly (shortest-representation serialization).

inline constexpr int kModelSchemaVersion = 1;

namespace detail {

inline nlohmann::json feature_set_json(FeatureSet fs) { return to_string(fs); }

inline FeatureSet feature_set_from_json(const nlohmann::json& j) {
    const auto s = j.get<std::string>();
    if (s == "wind_only") return FeatureSet::WindOnly;
    if (s == "all_variables") return FeatureSet::AllVariables;
    throw std::invalid_argument("model json: unknown feature_set '" + s + "'");
}

inline void check_header(const nlohmann::json& j, const std::string& expected_model) {
    if (!j.contains("schema_version") || j.at("schema_version").get<int>() != kModelSchemaVersion)
        throw std::invalid_argument("model json: missing or unsupported schema_version");
    if (j.at("model").get<std::string>() != expected_model)
        throw std::invalid_argument("model json: expected model '" + expected_model + "'");
}

inline nlohmann::json stats_json(const StandardizationStats& s) {
    return {{"means", s.means}, {"sds", s.sds}};
}

inline StandardizationStats stats_from_json(const nlohmann::json& j) {
    StandardizationStats s;
    s.means = j.at("means").get<std::vector<double>>();
    s.sds = j.at("sds").get<std::vector<double>>();
    return s;
}

} // namespace detail

inline nlohmann::json to_json(const LinearModel& m) {
    return {{"schema_version", kModelSchemaVersion},
            {"model", "linear"},
            {"feature_set", detail::feature_set_json(m.feature_set)},
            {"intercept", m.intercept},
            {"coefficients", m.coefficients}};
}

inline LinearModel linear_from_json(const nlohmann::json& j) {
    detail::check_header(j, "linear");
    LinearModel m;
    m.feature_set = detail::feature_set_from_json(j.at("feature_set"));
    m.intercept = j.at("intercept").get<double>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    return m;
}

inline nlohmann::json to_json(const SigmoidModel& m, const FitReport& report = {}) {
    return {{"schema_version", kModelSchemaVersion},
            {"model", "sigmoid"},
            {"variant", m.variant == SigmoidVariant::Logistic ? "logistic" : "polynomial_logistic"},
            {"feature_set", detail::feature_set_json(m.feature_set)},
            {"amplitude", m.amplitude},
            {"linear_coeffs", m.linear_coeffs},
            {"poly_coeffs", m.poly_coeffs},
            {"fit_report",
             {{"objective", report.objective},
              {"iterations", report.iterations},
              {"converged", report.converged},
              {"gradient_norm", report.gradient_norm}}}};
}

inline SigmoidModel sigmoid_from_json(const nlohmann::json& j) {
    detail::check_header(j, "sigmoid");
    SigmoidModel m;
    const auto variant = j.at("variant").get<std::string>();
    if (variant == "logistic")
        m.variant = SigmoidVariant::Logistic;
    else if (variant == "polynomial_logistic")
        m.variant = SigmoidVariant::PolynomialLogistic;
    else
        throw std::invalid_argument("model json: unknown sigmoid variant '" + variant + "'");
    m.feature_set = detail::feature_set_from_json(j.at("feature_set"));
    m.amplitude = j.at("amplitude").get<double>();
    m.linear_coeffs = j.at("linear_coeffs").get<std::vector<double>>();
    m.poly_coeffs = j.at("poly_coeffs").get<std::vector<double>>();
    return m;
}

// Trees serialize as node arrays with explicit child indices.
inline nlohmann::json to_json(const RegressionTree& t) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& nd : t.nodes)
        nodes.push_back({{"feature", nd.feature},
                         {"threshold", nd.threshold},
                         {"left", nd.left},
                         {"right", nd.right},
                         {"value", nd.value},
                         {"count", nd.count},
                         {"sse", nd.sse}});
    return {{"schema_version", kModelSchemaVersion}, {"model", "tree"}, {"nodes", nodes}};
}

inline RegressionTree tree_from_json(const nlohmann::json& j) {
    detail::check_header(j, "tree");
    RegressionTree t;
    for (const auto& nj : j.at("nodes")) {
        TreeNode nd;
        nd.feature = nj.at("feature").get<int>();
        nd.threshold = nj.at("threshold").get<double>();
        nd.left = nj.at("left").get<int>();
        nd.right = nj.at("right").get<int>();
        nd.value = nj.at("value").get<double>();
        nd.count = nj.at("count").get<int>();
        nd.sse = nj.at("sse").get<double>();
        t.nodes.push_back(nd);
    }
    return t;
}

inline nlohmann::json to_json(const Forest& f) {
    nlohmann::json trees = nlohmann::json::array();
    for (const auto& t : f.trees) trees.push_back(to_json(t).at("nodes"));
    return {{"schema_version", kModelSchemaVersion},
            {"model", "forest"},
            {"b", f.b},
            {"mtry", f.mtry},
            {"bootstrap", f.bootstrap},
            {"master_seed", f.master_seed},
            {"trees", trees}};
}

inline Forest forest_from_json(const nlohmann::json& j) {
    detail::check_header(j, "forest");
    Forest f;
    f.b = j.at("b").get<int>();
    f.mtry = j.at("mtry").get<int>();
    f.bootstrap = j.at("bootstrap").get<bool>();
    f.master_seed = j.at("master_seed").get<std::uint64_t>();
    for (const auto& nodes : j.at("trees")) {
        nlohmann::json tj = {{"schema_version", kModelSchemaVersion}, {"model", "tree"}, {"nodes", nodes}};
        f.trees.push_back(tree_from_json(tj));
    }
    return f;
}

inline nlohmann::json to_json(const KnnModel& m, FeatureSet fs) {
    return {{"schema_version", kModelSchemaVersion},
            {"model", "knn"},
            {"feature_set", detail::feature_set_json(fs)},
            {"k", m.k},
            {"stats", detail::stats_json(m.stats)},
            {"rows", m.stored_rows},
            {"targets", m.stored_targets}};
}

inline KnnModel knn_from_json(const nlohmann::json& j) {
    detail::check_header(j, "knn");
    KnnModel m;
    m.k = j.at("k").get<int>();
    m.stats = detail::stats_from_json(j.at("stats"));
    m.stored_rows = j.at("rows").get<std::vector<std::vector<double>>>();
    m.stored_targets = j.at("targets").get<std::vector<double>>();
    return m;
}

// Only support rows are stored.
inline nlohmann::json to_json(const SvrModel& m, FeatureSet fs) {
    return {{"schema_version", kModelSchemaVersion},
            {"model", "svr"},
            {"feature_set", detail::feature_set_json(fs)},
            {"epsilon", m.epsilon},
            {"cost", m.cost},
            {"gamma", m.gamma},
            {"bias", m.bias},
            {"converged", m.converged},
            {"coefficients", m.coefficients},
            {"support_rows", m.support_rows},
            {"stats", detail::stats_json(m.stats)}};
}

inline SvrModel svr_from_json(const nlohmann::json& j) {
    detail::check_header(j, "svr");
    SvrModel m;
    m.epsilon = j.at("epsilon").get<double>();
    m.cost = j.at("cost").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.bias = j.at("bias").get<double>();
    m.converged = j.at("converged").get<bool>();
    m.coefficients = j.at("coefficients").get<std::vector<double>>();
    m.support_rows = j.at("support_rows").get<std::vector<std::vector<double>>>();
    m.stats = detail::stats_from_json(j.at("stats"));
    return m;
}

// Companion JSON for a power-curve knot table: cut-in/cut-out speeds.
inline nlohmann::json to_json(const PowerCurve& c) {
    nlohmann::json knots = nlohmann::json::array();
    for (const auto& [w, p] : c.knots) knots.push_back({{"wind_speed_ms", w}, {"power_kw", p}});
    return {{"schema_version", kModelSchemaVersion},
            {"model", "power_curve"},
            {"cut_in", c.cut_in},
            {"cut_out", c.cut_out},
            {"knots", knots}};
}

inline PowerCurve power_curve_from_json(const nlohmann::json& j) {
    detail::check_header(j, "power_curve");
    PowerCurve c;
    c.cut_in = j.at("cut_in").get<double>();
    c.cut_out = j.at("cut_out").get<double>();
    for (const auto& k : j.at("knots"))
        c.knots.emplace_back(k.at("wind_speed_ms").get<double>(), k.at("power_kw").get<double>());
    c.validate();
    return c;
}

} // namespace windml

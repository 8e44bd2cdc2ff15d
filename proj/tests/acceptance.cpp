// End-to-end acceptance suite. Each numbered check prints one PASS/FAIL
// line; the process exits nonzero if any check fails. argv[1] is the path
// to the CLI binary (used by the determinism check), argv[2] an output
// scratch directory.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "windml/windml.hpp"

namespace fs = std::filesystem;
using namespace windml;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail = "") {
    std::cout << "[" << (number < 10 ? " " : "") << number << "] " << name << ": "
              << (pass ? "PASS" : "FAIL");
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

void run(int number, const std::string& name, const std::function<std::pair<bool, std::string>()>& body) {
    try {
        const auto [ok, detail] = body();
        report(number, name, ok, detail);
    } catch (const std::exception& e) {
        report(number, name, false, std::string("exception: ") + e.what());
    }
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

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

// ---------------------------------------------------------------------------

std::pair<bool, std::string> check_installed_power() {
    const double a = pct_installed_power(203.50, 6, 2050.0);
    const double b = pct_installed_power(855.52, 6, 2050.0);
    const bool ok = std::abs(a - 1.65) <= 0.005 && std::abs(b - 6.96) <= 0.005;
    return {ok, fmt(a) + " vs 1.65, " + fmt(b) + " vs 6.96"};
}

std::pair<bool, std::string> check_ensemble_identities() {
    Rng rng(2024);
    const auto rows = random_rows(rng, 500, 7);
    std::vector<double> y;
    for (const auto& r : rows)
        y.push_back(100.0 * std::tanh(r[0]) + 10.0 * r[3] + r[1] * r[2] + rng.normal());

    // Full-mtry random forest vs bagging, stream for stream.
    const auto bagging = fit_forest(rows, y, 20, 7, true, 77);
    const auto rf_full = fit_forest(rows, y, 20, 7, true, 77);
    double worst_a = 0.0;
    for (const auto& r : rows)
        worst_a = std::max(worst_a, std::abs(bagging.predict(r) - rf_full.predict(r)));

    // One un-bootstrapped bagged tree vs the unpruned greedy tree.
    const auto single = fit_forest(rows, y, 1, 7, false, 78);
    TreeParams params;
    Rng tree_rng(0);
    const auto cart = grow_tree(rows, y, params, all_features_sampler(7), tree_rng);
    double worst_b = 0.0;
    for (const auto& r : rows)
        worst_b = std::max(worst_b, std::abs(single.predict(r) - cart.predict(r)));

    // And a reduced-mtry forest must NOT coincide with bagging (sanity).
    const auto rf_small = fit_forest(rows, y, 20, 2, true, 77);
    bool differs = false;
    for (const auto& r : rows) differs |= rf_small.predict(r) != bagging.predict(r);

    const bool ok = worst_a <= 1e-12 && worst_b <= 1e-12 && differs;
    return {ok, "max gaps " + fmt(worst_a) + ", " + fmt(worst_b)};
}

double subset_sse(const std::vector<double>& targets, const std::vector<std::size_t>& idx) {
    double sum = 0.0;
    for (std::size_t i : idx) sum += targets[i];
    const double m = sum / static_cast<double>(idx.size());
    double sse = 0.0;
    for (std::size_t i : idx) sse += (targets[i] - m) * (targets[i] - m);
    return sse;
}

std::pair<bool, std::string> check_split_oracle() {
    Rng rng(303);
    for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_below(11)); // up to 12 rows
        const int p = 1 + static_cast<int>(rng.next_below(3));  // up to 3 features
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < n; ++i) {
            std::vector<double> r;
            for (int j = 0; j < p; ++j) {
                double v = rng.uniform01() * 10.0;
                if (rep % 2 == 0) v = std::floor(v); // exercise duplicate values
                r.push_back(v);
            }
            rows.push_back(r);
        }
        std::vector<double> y;
        for (int i = 0; i < n; ++i) y.push_back(rng.uniform01() * 5.0);
        std::vector<std::size_t> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);

        // Exhaustive enumeration of every (feature, midpoint) pair.
        std::optional<SplitResult> expected;
        for (int j = 0; j < p; ++j) {
            std::vector<double> values;
            for (const auto& r : rows) values.push_back(r[static_cast<std::size_t>(j)]);
            std::sort(values.begin(), values.end());
            values.erase(std::unique(values.begin(), values.end()), values.end());
            for (std::size_t k = 0; k + 1 < values.size(); ++k) {
                const double thr = values[k] + (values[k + 1] - values[k]) / 2.0;
                std::vector<std::size_t> left, right;
                for (std::size_t i : idx)
                    (rows[i][static_cast<std::size_t>(j)] < thr ? left : right).push_back(i);
                if (left.empty() || right.empty()) continue;
                const double dev = subset_sse(y, left) + subset_sse(y, right);
                if (!expected || dev < expected->deviance) expected = SplitResult{j, thr, dev};
            }
        }

        std::vector<int> all(static_cast<std::size_t>(p));
        std::iota(all.begin(), all.end(), 0);
        const auto got = best_split(rows, y, idx, all, 1);
        if (got.has_value() != expected.has_value())
            return {false, "presence mismatch at case " + std::to_string(rep)};
        if (!got) continue;
        if (std::abs(got->deviance - expected->deviance) > 1e-9)
            return {false, "deviance mismatch at case " + std::to_string(rep)};
        if (got->feature != expected->feature || got->threshold != expected->threshold) {
            // Equivalent-partition ties (possibly with sides swapped) are
            // decided by floating-point noise; anything else is a real
            // mismatch.
            auto left_set = [&](const SplitResult& s) {
                std::vector<bool> in;
                for (std::size_t i : idx)
                    in.push_back(rows[i][static_cast<std::size_t>(s.feature)] < s.threshold);
                return in;
            };
            const auto a = left_set(*got);
            auto b = left_set(*expected);
            std::vector<bool> flipped(b);
            flipped.flip();
            if (a != b && a != flipped)
                return {false, "split mismatch at case " + std::to_string(rep)};
        }
    }
    return {true, "50 random datasets"};
}

std::pair<bool, std::string> check_sigmoid_gradient() {
    Rng rng(404);
    const auto rows = random_rows(rng, 40, 7, 2.0);
    std::vector<double> y;
    for (int i = 0; i < 40; ++i) y.push_back(300.0 + 400.0 * rng.uniform01());

    double worst = 0.0;
    for (const auto variant : {SigmoidVariant::Logistic, SigmoidVariant::PolynomialLogistic}) {
        const int np = detail::sigmoid_param_count(variant, FeatureSet::AllVariables);
        for (int point = 0; point < 10; ++point) {
            Eigen::VectorXd theta(np);
            theta(0) = 400.0 + 600.0 * rng.uniform01();
            for (int k = 1; k < np; ++k) theta(k) = rng.uniform01() - 0.5;

            const Eigen::VectorXd g =
                sigmoid_gradient(theta, rows, y, variant, FeatureSet::AllVariables);
            Eigen::VectorXd num(np);
            for (int k = 0; k < np; ++k) {
                const double h = 1e-6 * std::max(1.0, std::abs(theta(k)));
                Eigen::VectorXd tp = theta, tm = theta;
                tp(k) += h;
                tm(k) -= h;
                num(k) = (sigmoid_objective(tp, rows, y, variant, FeatureSet::AllVariables) -
                          sigmoid_objective(tm, rows, y, variant, FeatureSet::AllVariables)) /
                         (2.0 * h);
            }
            const double rel = (num - g).norm() / std::max(num.norm(), 1e-8);
            worst = std::max(worst, rel);
        }
    }
    return {worst < 1e-5, "worst relative error " + fmt(worst)};
}

std::pair<bool, std::string> check_lasso_limits() {
    Rng rng(505);
    const auto rows = random_rows(rng, 200, 7);
    std::vector<double> y;
    for (const auto& r : rows) y.push_back(8.0 + 3.0 * r[0] - 2.0 * r[4] + 0.2 * rng.normal());

    const auto lasso0 = fit_lasso_at(rows, y, 0.0, FeatureSet::AllVariables);
    const auto ols = fit_ols(rows, y, FeatureSet::AllVariables);
    double worst = std::abs(lasso0.intercept - ols.intercept);
    for (std::size_t j = 0; j < 7; ++j)
        worst = std::max(worst, std::abs(lasso0.coefficients[j] - ols.coefficients[j]));

    const auto stats = compute_stats(rows);
    const auto x_std = apply_stats(stats, rows);
    double ybar = 0.0;
    for (double v : y) ybar += v;
    ybar /= static_cast<double>(y.size());
    std::vector<double> yc;
    for (double v : y) yc.push_back(v - ybar);
    const double lmax = lasso_lambda_max(x_std, yc);
    bool all_zero = true;
    for (const double lambda : {lmax, 1.2 * lmax, 10.0 * lmax}) {
        const auto m = fit_lasso_at(rows, y, lambda, FeatureSet::AllVariables);
        for (double c : m.coefficients) all_zero &= c == 0.0;
    }
    return {worst <= 1e-6 && all_zero,
            "max ols gap " + fmt(worst) + ", zero-at-lambda-max " + (all_zero ? "yes" : "no")};
}

std::pair<bool, std::string> check_svr_oracle() {
    Rng rng(606);
    double worst_gap = 0.0;
    for (int inst = 0; inst < 5; ++inst) {
        const auto rows = random_rows(rng, 3, 2, 1.5);
        std::vector<double> y;
        for (int i = 0; i < 3; ++i) y.push_back(rng.uniform01() * 2.0 - 1.0);
        const double eps = 0.05 + 0.1 * rng.uniform01();
        const double cost = 1.0;
        const double gamma = 0.5;

        const auto model = fit_svr(rows, y, eps, cost, gamma);

        // Brute-force grid over the equality-constrained box: beta3 is
        // determined by sum(beta) = 0.
        const auto stats = compute_stats(rows);
        const auto x = apply_stats(stats, rows);
        std::vector<std::vector<double>> gram(3, std::vector<double>(3));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double d = 0.0;
                for (int k = 0; k < 2; ++k) {
                    const double diff = x[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] -
                                        x[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
                    d += diff * diff;
                }
                gram[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    std::exp(-gamma * d);
            }
        const double step = 5e-4;
        double brute = std::numeric_limits<double>::infinity();
        std::vector<double> beta(3);
        for (double b1 = -cost; b1 <= cost + 1e-12; b1 += step) {
            for (double b2 = -cost; b2 <= cost + 1e-12; b2 += step) {
                const double b3 = -b1 - b2;
                if (std::abs(b3) > cost) continue;
                beta[0] = b1;
                beta[1] = b2;
                beta[2] = b3;
                brute = std::min(brute, svr_dual_objective(gram, y, eps, beta));
            }
        }
        worst_gap = std::max(worst_gap, std::abs(model.dual_objective - brute));
    }

    // Sparsity invariant on n = 200: points strictly inside the tube carry
    // no dual weight.
    const auto rows = random_rows(rng, 200, 2, 2.0);
    std::vector<double> y;
    for (const auto& r : rows) y.push_back(std::sin(r[0]) + 0.5 * r[1]);
    const double eps = 0.1;
    const auto model = fit_svr(rows, y, eps, 50.0, 0.5);
    const auto x_std = apply_stats(model.stats, rows);
    bool sparse_ok = model.converged && model.support_rows.size() < rows.size();
    for (std::size_t i = 0; i < rows.size() && sparse_ok; ++i) {
        if (std::abs(y[i] - model.predict(rows[i])) < eps - 0.01)
            for (const auto& s : model.support_rows) sparse_ok &= s != x_std[i];
    }
    return {worst_gap <= 1e-4 && sparse_ok,
            "worst dual gap " + fmt(worst_gap) + ", support " +
                std::to_string(model.support_rows.size()) + "/200"};
}

std::vector<TurbineDataset> make_farm(std::size_t n_turbines, std::size_t n_steps,
                                      std::uint64_t seed, double decorrelation) {
    WindProcess wind;
    wind.seed = seed;
    std::vector<TurbinePhysics> physics(n_turbines);
    const auto raw = simulate_farm(physics, wind, decorrelation, n_steps);
    std::vector<TurbineDataset> farm;
    for (const auto& records : raw) farm.push_back(aggregate_30min(records).dataset);
    return align_farm(farm);
}

std::pair<bool, std::string> check_method_ordering() {
    const auto farm = make_farm(6, 45720, 42, 0.3); // 15240 half-hour rows
    const auto plan = make_split_plan(farm.front().rows.size(), 8000, 10, 724);

    auto spec_for = [](Method m, FeatureSet fs) {
        MethodSpec s;
        s.method = m;
        s.feature_set = fs;
        s.seed = 42;
        s.b = 100;
        return s;
    };
    const auto persistence =
        evaluate(spec_for(Method::Persistence, FeatureSet::AllVariables), farm, plan,
                 InputMode::LocalSensors);
    const auto cart = evaluate(spec_for(Method::Cart, FeatureSet::AllVariables), farm, plan,
                               InputMode::LocalSensors);
    const auto bagging = evaluate(spec_for(Method::Bagging, FeatureSet::AllVariables), farm, plan,
                                  InputMode::LocalSensors);
    const auto linear = evaluate(spec_for(Method::Linear, FeatureSet::WindOnly), farm, plan,
                                 InputMode::LocalSensors);
    const auto polylog =
        evaluate(spec_for(Method::PolynomialLogistic, FeatureSet::WindOnly), farm, plan,
                 InputMode::LocalSensors);

    auto beats = [](const EvalReport& better, const EvalReport& worse) {
        const double margin = std::max(better.sd_rmse.value_or(0.0), worse.sd_rmse.value_or(0.0));
        return worse.mean_rmse - better.mean_rmse > margin;
    };
    const bool ok = beats(bagging, cart) && beats(cart, persistence) && beats(polylog, linear);
    return {ok, "bagging " + fmt(bagging.mean_rmse) + " < cart " + fmt(cart.mean_rmse) +
                    " < persistence " + fmt(persistence.mean_rmse) + "; polylog " +
                    fmt(polylog.mean_rmse) + " < linear " + fmt(linear.mean_rmse)};
}

std::pair<bool, std::string> check_stability() {
    MethodSpec spec;
    spec.method = Method::Bagging;
    spec.feature_set = FeatureSet::AllVariables;
    spec.seed = 42;
    spec.b = 50;

    const auto farm_mixed = make_farm(4, 13500, 42, 0.3); // 4500 rows
    const auto plan = make_split_plan(farm_mixed.front().rows.size(), 3000, 5, 300);
    const auto local_mixed = evaluate(spec, farm_mixed, plan, InputMode::LocalSensors);
    const auto avg_mixed = evaluate(spec, farm_mixed, plan, InputMode::VirtualAverage);

    const auto farm_clone = make_farm(4, 13500, 42, 0.0);
    const auto plan0 = make_split_plan(farm_clone.front().rows.size(), 3000, 5, 300);
    const auto local_clone = evaluate(spec, farm_clone, plan0, InputMode::LocalSensors);
    const auto avg_clone = evaluate(spec, farm_clone, plan0, InputMode::VirtualAverage);

    const bool degraded = avg_mixed.mean_rmse >= local_mixed.mean_rmse;
    const double clone_gap = std::abs(avg_clone.mean_rmse - local_clone.mean_rmse);
    const bool clone_ok = clone_gap < 0.01 * local_clone.mean_rmse;
    return {degraded && clone_ok,
            "decorr 0.3: local " + fmt(local_mixed.mean_rmse) + " vs averaged " +
                fmt(avg_mixed.mean_rmse) + "; decorr 0 gap " + fmt(clone_gap)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::pair<bool, std::string> check_cli_determinism(const std::string& cli, const fs::path& out) {
    fs::create_directories(out);
    const fs::path config = out / "bench_config.json";
    {
        std::ofstream cfg(config);
        cfg << R"({
  "seed": 42,
  "data": {"synth": {"n_turbines": 3, "n_steps": 3600, "spatial_decorrelation": 0.3}},
  "split": {"train_size": 800, "n_blocks": 4, "block_size": 100},
  "methods": [
    {"name": "persistence"},
    {"name": "linear", "feature_set": "wind_only"},
    {"name": "bagging", "feature_set": "all_variables", "b": 8},
    {"name": "knn", "feature_set": "all_variables", "k_grid": [1, 5, 9]}
  ]
})";
    }
    auto run_bench = [&](const std::string& dir, int jobs) {
        const std::string cmd = "\"" + cli + "\" benchmark --config \"" + config.string() +
                                "\" --out \"" + (out / dir).string() + "\" --jobs " +
                                std::to_string(jobs) + " > /dev/null";
        return std::system(cmd.c_str());
    };
    if (run_bench("run1", 1) != 0) return {false, "first run failed"};
    if (run_bench("run2", 1) != 0) return {false, "second run failed"};
    if (run_bench("run3", 3) != 0) return {false, "parallel run failed"};

    bool ok = true;
    std::string detail;
    for (const char* file : {"summary.csv", "blocks.csv", "ranking.txt"}) {
        const auto a = slurp(out / "run1" / file);
        const auto b = slurp(out / "run2" / file);
        const auto c = slurp(out / "run3" / file);
        if (a.empty() || a != b || a != c) {
            ok = false;
            detail += std::string(file) + " differs; ";
        }
    }
    return {ok, ok ? "3 runs byte-identical" : detail};
}

std::pair<bool, std::string> check_pipeline_invariants() {
    Rng rng(909);
    for (int rep = 0; rep < 1000; ++rep) {
        // Randomized 30-minute window of 3 operational records.
        const Timestamp window = static_cast<Timestamp>(rng.next_below(100000)) * kThirtyMinutes;
        std::vector<RawRecord> records;
        std::vector<double> speeds, dirs, temps, powers;
        for (int k = 0; k < 3; ++k) {
            RawRecord r;
            r.timestamp = window + k * kTenMinutes;
            r.turbine_id = "T1";
            r.state = TurbineState::FullOperation;
            r.wind_speed = rng.uniform01() * 25.0;
            r.wind_direction = rng.uniform01() * 360.0;
            r.temperature = rng.uniform01() * 40.0 - 10.0;
            r.power = rng.uniform01() * 2050.0;
            speeds.push_back(r.wind_speed);
            dirs.push_back(r.wind_direction);
            temps.push_back(r.temperature);
            powers.push_back(r.power);
            records.push_back(r);
        }
        const auto agg = aggregate_30min(records);
        if (agg.dataset.rows.size() != 1 || agg.skipped_windows != 0)
            return {false, "window not aggregated at case " + std::to_string(rep)};
        const auto& row = agg.dataset.rows[0];

        // Direction features sit on the unit circle.
        if (std::abs(row.d_cos * row.d_cos + row.d_sin * row.d_sin - 1.0) > 1e-12)
            return {false, "direction feature off the unit circle at case " + std::to_string(rep)};

        // Scalar aggregates match direct statistics.
        if (std::abs(row.w - mean(speeds)) > 1e-12 || std::abs(row.t - mean(temps)) > 1e-12 ||
            std::abs(row.y - mean(powers)) > 1e-12 ||
            std::abs(row.w_var - sample_variance(speeds)) > 1e-12)
            return {false, "scalar aggregate mismatch at case " + std::to_string(rep)};

        // Circular mean is wraparound-invariant.
        std::vector<double> shifted;
        const double turns = 360.0 * static_cast<double>(1 + rng.next_below(3));
        for (double d : dirs) shifted.push_back(d + turns);
        if (std::abs(circular_mean(shifted) - circular_mean(dirs)) > 1e-9)
            return {false, "circular mean wraparound at case " + std::to_string(rep)};

        // Pseudo-variance matches the direct complex formula.
        const auto pv = circular_pseudo_variance(dirs);
        if (std::abs(row.d_var_re - pv.real()) > 1e-12 ||
            std::abs(row.d_var_im - pv.imag()) > 1e-12)
            return {false, "pseudo-variance mismatch at case " + std::to_string(rep)};

        // Standardization round trip on a random matrix every few cases.
        if (rep % 10 == 0) {
            const int n = 2 + static_cast<int>(rng.next_below(20));
            std::vector<std::vector<double>> m;
            for (int i = 0; i < n; ++i) {
                std::vector<double> r;
                for (int j = 0; j < 7; ++j) r.push_back(rng.normal() * 3.0 + 1.0);
                m.push_back(r);
            }
            try {
                const auto stats = compute_stats(m);
                const auto std_m = apply_stats(stats, m);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < 7; ++j) {
                        const double back = std_m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                                                stats.sds[static_cast<std::size_t>(j)] +
                                            stats.means[static_cast<std::size_t>(j)];
                        if (std::abs(back - m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) > 1e-9)
                            return {false, "standardization round trip at case " + std::to_string(rep)};
                    }
            } catch (const std::invalid_argument&) {
                // A constant column in the random draw is legitimately rejected.
            }
        }
    }
    return {true, "1000 randomized cases"};
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : "";
    const fs::path out = argc > 2 ? fs::path(argv[2]) : fs::path("acceptance_out");

    run(1, "installed-power percentage formula", check_installed_power);
    run(2, "ensemble equivalences", check_ensemble_identities);
    run(3, "split search vs exhaustive oracle", check_split_oracle);
    run(4, "sigmoid gradient vs finite differences", check_sigmoid_gradient);
    run(5, "lasso limit cases", check_lasso_limits);
    run(6, "svr dual vs brute force + sparsity", check_svr_oracle);
    run(10, "pipeline invariant suite", check_pipeline_invariants);
    if (cli.empty()) {
        report(9, "benchmark determinism across runs and jobs", false, "no CLI path given");
    } else {
        run(9, "benchmark determinism across runs and jobs",
            [&] { return check_cli_determinism(cli, out); });
    }
    run(8, "stability under farm-averaged inputs", check_stability);
    run(7, "method ordering on the synthetic farm", check_method_ordering);

    std::cout << (g_failures == 0 ? "all checks passed" : std::to_string(g_failures) + " check(s) failed")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}

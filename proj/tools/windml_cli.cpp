// windml command-line driver: data synthesis, ingestion, the benchmark
// protocol, the local-vs-averaged stability experiment, plot-ready data
// export, and single-model prediction.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "windml/windml.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitDataError = 3;
constexpr int kExitNumericalError = 4;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << content;
}

// Manifest: every output file with its content hash, plus the effective
// config echoed back. The generated_at line is the only run-varying field.
void write_manifest(const fs::path& out_dir, const std::vector<fs::path>& files,
                    const json& config_echo) {
    json manifest;
    const auto now = std::chrono::system_clock::now();
    manifest["generated_at"] = windml::detail::format_iso8601_utc(
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
    manifest["config"] = config_echo;
    manifest["files"] = json::array();
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        manifest["files"].push_back(
            {{"path", f.filename().string()}, {"sha256", windml::Sha256::of(ss.str())}});
    }
    write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// Config parsing

windml::FeatureSet parse_feature_set(const std::string& s) {
    if (s == "wind_only") return windml::FeatureSet::WindOnly;
    if (s == "all_variables") return windml::FeatureSet::AllVariables;
    throw ConfigError("unknown feature_set '" + s + "'");
}

struct SynthScenario {
    std::size_t n_turbines = 6;
    std::size_t n_steps = 45720; // 10-minute steps; /3 gives 30-minute rows
    double spatial_decorrelation = 0.0;
    windml::WindProcess wind;
    windml::TurbinePhysics physics;
    windml::PowerNoise noise;

    static SynthScenario from_json(const json& j) {
        SynthScenario s;
        s.n_turbines = j.value("n_turbines", s.n_turbines);
        s.n_steps = j.value("n_steps", s.n_steps);
        s.spatial_decorrelation = j.value("spatial_decorrelation", s.spatial_decorrelation);
        s.wind.weibull_shape = j.value("weibull_shape", s.wind.weibull_shape);
        s.wind.weibull_scale = j.value("weibull_scale", s.wind.weibull_scale);
        s.wind.ar1_phi = j.value("ar1_phi", s.wind.ar1_phi);
        s.wind.direction_drift = j.value("direction_drift", s.wind.direction_drift);
        s.physics.rho = j.value("rho", s.physics.rho);
        s.physics.rotor_diameter = j.value("rotor_diameter", s.physics.rotor_diameter);
        s.physics.cp = j.value("cp", s.physics.cp);
        s.physics.rated_power = j.value("rated_power", s.physics.rated_power);
        s.physics.cut_in = j.value("cut_in", s.physics.cut_in);
        s.physics.cut_out = j.value("cut_out", s.physics.cut_out);
        s.noise.multiplicative_sigma = j.value("mult_sigma", s.noise.multiplicative_sigma);
        s.noise.additive_sigma_kw = j.value("add_sigma", s.noise.additive_sigma_kw);
        return s;
    }

    json to_json() const {
        return {{"n_turbines", n_turbines},
                {"n_steps", n_steps},
                {"spatial_decorrelation", spatial_decorrelation},
                {"weibull_shape", wind.weibull_shape},
                {"weibull_scale", wind.weibull_scale},
                {"ar1_phi", wind.ar1_phi},
                {"direction_drift", wind.direction_drift},
                {"rho", physics.rho},
                {"rotor_diameter", physics.rotor_diameter},
                {"cp", physics.cp},
                {"rated_power", physics.rated_power},
                {"cut_in", physics.cut_in},
                {"cut_out", physics.cut_out},
                {"mult_sigma", noise.multiplicative_sigma},
                {"add_sigma", noise.additive_sigma_kw}};
    }
};

struct ExperimentConfig {
    json raw;
    std::uint64_t seed = 0;
    double rated_power_kw = 2050.0;
    std::optional<SynthScenario> synth;
    std::optional<fs::path> scada_csv;
    std::vector<fs::path> feature_files;
    std::size_t train_size = 8000, n_blocks = 10, block_size = 724;
    std::vector<windml::MethodSpec> methods;
    std::vector<windml::InputMode> modes{windml::InputMode::LocalSensors};
    std::optional<windml::PowerCurve> curve;
    int jobs = 1;
};

windml::MethodSpec parse_method(const json& j, const ExperimentConfig& cfg) {
    windml::MethodSpec spec;
    const auto name = j.at("name").get<std::string>();
    const auto method = windml::method_from_string(name);
    if (!method) throw ConfigError("unknown method '" + name + "'");
    spec.method = *method;
    spec.seed = cfg.seed;
    if (j.contains("feature_set")) spec.feature_set = parse_feature_set(j.at("feature_set"));
    spec.b = j.value("b", spec.b);
    spec.mtry = j.value("mtry", spec.mtry);
    spec.min_node_size = j.value("min_node_size", spec.min_node_size);
    spec.prune_cart = j.value("prune", spec.prune_cart);
    spec.cv_folds = j.value("cv_folds", spec.cv_folds);
    spec.lasso_cv_folds = j.value("lasso_cv_folds", spec.lasso_cv_folds);
    if (j.contains("k_grid")) spec.k_grid = j.at("k_grid").get<std::vector<int>>();
    if (j.contains("epsilon_grid"))
        spec.epsilon_grid = j.at("epsilon_grid").get<std::vector<double>>();
    spec.jobs = cfg.jobs;
    if (spec.method == windml::Method::PowerCurve) {
        if (!cfg.curve) throw ConfigError("method 'power_curve' requires a power_curve entry");
        spec.curve = cfg.curve;
    }
    return spec;
}

// The benchmark's full method table: persistence, then the wind-only
// section, then the all-variables section.
std::vector<json> table1_methods() {
    std::vector<json> out;
    out.push_back({{"name", "persistence"}});
    for (const char* m : {"linear", "logistic", "polynomial_logistic", "cart", "bagging", "svr"})
        out.push_back({{"name", m}, {"feature_set", "wind_only"}});
    for (const char* m : {"linear", "logistic", "polynomial_logistic", "lasso", "cart", "bagging",
                          "random_forest", "svr", "knn"})
        out.push_back({{"name", m}, {"feature_set", "all_variables"}});
    return out;
}

ExperimentConfig load_config(const fs::path& path, std::optional<std::uint64_t> seed_override,
                             int jobs) {
    ExperimentConfig cfg;
    cfg.raw = load_json_file(path);
    const json& j = cfg.raw;
    if (!j.contains("seed") && !seed_override) throw ConfigError("config requires a 'seed'");
    cfg.seed = seed_override ? *seed_override : j.at("seed").get<std::uint64_t>();
    cfg.raw["seed"] = cfg.seed;
    cfg.rated_power_kw = j.value("rated_power_kw", cfg.rated_power_kw);
    cfg.jobs = jobs;

    if (j.contains("data")) {
        const json& d = j.at("data");
        if (d.contains("synth")) {
            cfg.synth = SynthScenario::from_json(d.at("synth"));
            cfg.synth->wind.seed = cfg.seed;
        } else if (d.contains("scada_csv")) {
            cfg.scada_csv = fs::path(d.at("scada_csv").get<std::string>());
        } else if (d.contains("features")) {
            for (const auto& f : d.at("features"))
                cfg.feature_files.emplace_back(f.get<std::string>());
        } else {
            throw ConfigError("data must specify one of: synth, scada_csv, features");
        }
    }
    if (j.contains("split")) {
        const json& s = j.at("split");
        cfg.train_size = s.value("train_size", cfg.train_size);
        cfg.n_blocks = s.value("n_blocks", cfg.n_blocks);
        cfg.block_size = s.value("block_size", cfg.block_size);
    }
    if (j.contains("power_curve")) {
        const json& pc = j.at("power_curve");
        std::ifstream knots_in(pc.at("knots_csv").get<std::string>());
        if (!knots_in) throw DataError("cannot open power curve knots CSV");
        windml::PowerCurve curve = windml::power_curve_from_json(
            load_json_file(pc.at("meta_json").get<std::string>()));
        curve.knots = windml::read_power_curve_knots(knots_in);
        curve.validate();
        cfg.curve = curve;
    }
    if (j.contains("modes")) {
        cfg.modes.clear();
        for (const auto& m : j.at("modes")) {
            const auto s = m.get<std::string>();
            if (s == "local")
                cfg.modes.push_back(windml::InputMode::LocalSensors);
            else if (s == "virtual_average")
                cfg.modes.push_back(windml::InputMode::VirtualAverage);
            else
                throw ConfigError("unknown mode '" + s + "'");
        }
    }
    if (j.contains("methods")) {
        if (j.at("methods").is_string()) {
            if (j.at("methods").get<std::string>() != "table1")
                throw ConfigError("methods must be a list or the string 'table1'");
            for (const auto& m : table1_methods()) cfg.methods.push_back(parse_method(m, cfg));
        } else {
            for (const auto& m : j.at("methods")) cfg.methods.push_back(parse_method(m, cfg));
        }
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Data assembly

std::vector<windml::TurbineDataset> datasets_from_records(
    const std::vector<std::vector<windml::RawRecord>>& per_turbine) {
    std::vector<windml::TurbineDataset> farm;
    for (const auto& records : per_turbine) {
        const auto operational = windml::filter_operational(records);
        farm.push_back(windml::aggregate_30min(operational).dataset);
    }
    return windml::align_farm(farm);
}

std::vector<windml::TurbineDataset> build_farm(const ExperimentConfig& cfg) {
    if (cfg.synth) {
        const auto& s = *cfg.synth;
        std::vector<windml::TurbinePhysics> physics(s.n_turbines, s.physics);
        const auto farm = windml::simulate_farm(physics, s.wind, s.spatial_decorrelation,
                                                s.n_steps, s.noise);
        return datasets_from_records(farm);
    }
    if (cfg.scada_csv) {
        std::ifstream in(*cfg.scada_csv);
        if (!in) throw DataError("cannot open " + cfg.scada_csv->string());
        const auto parsed = windml::parse_scada(in);
        std::map<std::string, std::vector<windml::RawRecord>> by_turbine;
        for (const auto& r : parsed.records) by_turbine[r.turbine_id].push_back(r);
        std::vector<std::vector<windml::RawRecord>> per_turbine;
        for (auto& [id, records] : by_turbine) per_turbine.push_back(std::move(records));
        return datasets_from_records(per_turbine);
    }
    if (!cfg.feature_files.empty()) {
        std::vector<windml::TurbineDataset> farm;
        for (const auto& f : cfg.feature_files) {
            std::ifstream in(f);
            if (!in) throw DataError("cannot open " + f.string());
            farm.push_back(windml::read_features(in, f.stem().string()));
        }
        return windml::align_farm(farm);
    }
    throw ConfigError("no data source configured");
}

// ---------------------------------------------------------------------------
// Benchmark / stability runs

struct RunUnit {
    windml::MethodSpec spec;
    windml::InputMode mode;
};

std::vector<windml::EvalReport> run_units(const std::vector<RunUnit>& units,
                                          const std::vector<windml::TurbineDataset>& farm,
                                          const windml::SplitPlan& plan, double rated_kw,
                                          int jobs) {
    std::vector<windml::EvalReport> reports(units.size());
    std::vector<std::string> errors(units.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= units.size()) break;
            try {
                // Nested forest parallelism is disabled when the unit pool
                // itself is parallel; determinism holds either way.
                windml::MethodSpec spec = units[i].spec;
                if (jobs > 1) spec.jobs = 1;
                reports[i] = windml::evaluate(spec, farm, plan, units[i].mode, rated_kw);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    std::string all_errors;
    for (std::size_t i = 0; i < units.size(); ++i)
        if (!errors[i].empty())
            all_errors += units[i].spec.method == windml::Method::Persistence
                              ? errors[i] + "; "
                              : windml::to_string(units[i].spec.method) + ": " + errors[i] + "; ";
    if (!all_errors.empty()) throw std::runtime_error("evaluation failed: " + all_errors);
    return reports;
}

int cmd_benchmark(const fs::path& config_path, const fs::path& out_dir,
                  std::optional<std::uint64_t> seed, int jobs) {
    const auto cfg = load_config(config_path, seed, jobs);
    if (cfg.methods.empty()) throw ConfigError("benchmark requires a non-empty method list");
    const auto farm = build_farm(cfg);
    const auto plan =
        windml::make_split_plan(farm.front().rows.size(), cfg.train_size, cfg.n_blocks,
                                cfg.block_size);

    std::vector<RunUnit> units;
    for (const auto& m : cfg.methods) units.push_back({m, windml::InputMode::LocalSensors});
    const auto reports = run_units(units, farm, plan, cfg.rated_power_kw, cfg.jobs);

    // Ranked table: best mean RMSE first.
    auto ranked = reports;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.mean_rmse < b.mean_rmse; });

    fs::create_directories(out_dir);
    std::ostringstream summary, blocks, table;
    windml::write_summary_csv(summary, reports);
    windml::write_block_csv(blocks, reports);
    windml::write_summary_table(table, ranked);
    write_text_file(out_dir / "summary.csv", summary.str());
    write_text_file(out_dir / "blocks.csv", blocks.str());
    write_text_file(out_dir / "ranking.txt", table.str());
    write_manifest(out_dir,
                   {out_dir / "summary.csv", out_dir / "blocks.csv", out_dir / "ranking.txt"},
                   cfg.raw);
    std::cout << table.str();
    return kExitOk;
}

int cmd_stability(const fs::path& config_path, const fs::path& out_dir,
                  std::optional<std::uint64_t> seed, int jobs) {
    const auto cfg = load_config(config_path, seed, jobs);
    if (cfg.methods.empty()) throw ConfigError("stability requires a non-empty method list");
    const auto farm = build_farm(cfg);
    if (farm.size() < 2)
        throw ConfigError("stability requires a farm with >= 2 turbines (averaging is vacuous)");
    const auto plan =
        windml::make_split_plan(farm.front().rows.size(), cfg.train_size, cfg.n_blocks,
                                cfg.block_size);

    std::vector<RunUnit> units;
    for (const auto& m : cfg.methods) {
        units.push_back({m, windml::InputMode::LocalSensors});
        units.push_back({m, windml::InputMode::VirtualAverage});
    }
    const auto reports = run_units(units, farm, plan, cfg.rated_power_kw, cfg.jobs);

    std::ostringstream paired;
    paired << "method,feature_set,local_mean_rmse,virtual_mean_rmse,delta_rmse\n";
    for (std::size_t i = 0; i + 1 < reports.size(); i += 2) {
        const auto& local = reports[i];
        const auto& avg = reports[i + 1];
        paired << local.method_name << ',' << windml::to_string(local.feature_set) << ','
               << windml::detail::fmt_double(local.mean_rmse, "%.10g") << ','
               << windml::detail::fmt_double(avg.mean_rmse, "%.10g") << ','
               << windml::detail::fmt_double(avg.mean_rmse - local.mean_rmse, "%.10g") << '\n';
    }

    fs::create_directories(out_dir);
    std::ostringstream summary, blocks;
    windml::write_summary_csv(summary, reports);
    windml::write_block_csv(blocks, reports);
    write_text_file(out_dir / "stability.csv", paired.str());
    write_text_file(out_dir / "summary.csv", summary.str());
    write_text_file(out_dir / "blocks.csv", blocks.str());
    write_manifest(out_dir,
                   {out_dir / "stability.csv", out_dir / "summary.csv", out_dir / "blocks.csv"},
                   cfg.raw);
    std::cout << paired.str();
    return kExitOk;
}

int cmd_synth(const fs::path& config_path, const fs::path& out_dir,
              std::optional<std::uint64_t> seed, int jobs) {
    const auto cfg = load_config(config_path, seed, jobs);
    if (!cfg.synth) throw ConfigError("synth requires data.synth in the config");
    const auto& s = *cfg.synth;
    std::vector<windml::TurbinePhysics> physics(s.n_turbines, s.physics);
    const auto farm =
        windml::simulate_farm(physics, s.wind, s.spatial_decorrelation, s.n_steps, s.noise);

    fs::create_directories(out_dir);
    std::ostringstream scada;
    std::vector<windml::RawRecord> all;
    for (std::size_t t = 0; t < farm.front().size(); ++t)
        for (const auto& turbine : farm) all.push_back(turbine[t]);
    windml::write_scada(scada, all);
    write_text_file(out_dir / "scada.csv", scada.str());
    write_text_file(out_dir / "scenario.json", s.to_json().dump(2) + "\n");
    write_manifest(out_dir, {out_dir / "scada.csv", out_dir / "scenario.json"}, cfg.raw);
    return kExitOk;
}

int cmd_ingest(const fs::path& scada_path, const fs::path& out_dir) {
    std::ifstream in(scada_path);
    if (!in) throw DataError("cannot open " + scada_path.string());
    const auto parsed = windml::parse_scada(in);

    fs::create_directories(out_dir);
    std::vector<fs::path> outputs;
    std::map<std::string, std::vector<windml::RawRecord>> by_turbine;
    for (const auto& r : parsed.records) by_turbine[r.turbine_id].push_back(r);
    for (const auto& [id, records] : by_turbine) {
        const auto result = windml::aggregate_30min(windml::filter_operational(records));
        std::ostringstream features;
        windml::write_features(features, result.dataset);
        const auto path = out_dir / ("features_" + id + ".csv");
        write_text_file(path, features.str());
        outputs.push_back(path);
        std::cout << id << ": " << result.dataset.rows.size() << " rows, "
                  << result.skipped_windows << " incomplete windows skipped\n";
    }
    std::ostringstream rejections;
    windml::write_rejections(rejections, parsed.rejections);
    write_text_file(out_dir / "rejections.csv", rejections.str());
    outputs.push_back(out_dir / "rejections.csv");
    std::cout << parsed.rejections.size() << " lines rejected\n";
    write_manifest(out_dir, outputs, json{{"scada", scada_path.string()}});
    return kExitOk;
}

int cmd_plotdata(const fs::path& config_path, const fs::path& out_dir,
                 std::optional<std::uint64_t> seed, int jobs) {
    const auto cfg = load_config(config_path, seed, jobs);
    const auto farm = build_farm(cfg);

    fs::create_directories(out_dir);
    std::vector<fs::path> outputs;

    // Power-vs-speed scatter for the first turbine, one row per instant.
    std::ostringstream scatter;
    scatter << "timestamp,w,w_cubed,y\n";
    for (const auto& r : farm.front().rows)
        scatter << windml::detail::format_iso8601_utc(r.timestamp) << ','
                << windml::detail::fmt_double(r.w, "%.10g") << ','
                << windml::detail::fmt_double(r.w * r.w * r.w, "%.10g") << ','
                << windml::detail::fmt_double(r.y, "%.10g") << '\n';
    write_text_file(out_dir / "scatter.csv", scatter.str());
    outputs.push_back(out_dir / "scatter.csv");

    // Theoretical overlays: Betz-limit cp and the configured cp, plus the
    // builder curve when provided.
    windml::TurbinePhysics physics = cfg.synth ? cfg.synth->physics : windml::TurbinePhysics{};
    windml::TurbinePhysics betz = physics;
    betz.cp = 16.0 / 27.0;
    std::ostringstream curves;
    curves << "wind_speed_ms,betz_kw,configured_kw" << (cfg.curve ? ",builder_kw" : "") << '\n';
    for (int i = 0; i <= static_cast<int>(physics.cut_out * 10.0); ++i) {
        const double w = i / 10.0;
        curves << windml::detail::fmt_double(w, "%.10g") << ','
               << windml::detail::fmt_double(windml::theoretical_power(betz, w), "%.10g") << ','
               << windml::detail::fmt_double(windml::theoretical_power(physics, w), "%.10g");
        if (cfg.curve)
            curves << ',' << windml::detail::fmt_double(
                                 windml::power_curve_predict(*cfg.curve, w), "%.10g");
        curves << '\n';
    }
    write_text_file(out_dir / "curves.csv", curves.str());
    outputs.push_back(out_dir / "curves.csv");

    // Per-method RMSE boxplot data when methods are configured.
    if (!cfg.methods.empty()) {
        const auto plan = windml::make_split_plan(farm.front().rows.size(), cfg.train_size,
                                                  cfg.n_blocks, cfg.block_size);
        std::vector<RunUnit> units;
        for (const auto& m : cfg.methods) units.push_back({m, windml::InputMode::LocalSensors});
        const auto reports = run_units(units, farm, plan, cfg.rated_power_kw, cfg.jobs);
        std::ostringstream boxplot;
        windml::write_block_csv(boxplot, reports);
        write_text_file(out_dir / "boxplot.csv", boxplot.str());
        outputs.push_back(out_dir / "boxplot.csv");
    }
    write_manifest(out_dir, outputs, cfg.raw);
    return kExitOk;
}

int cmd_predict(const fs::path& model_path, const fs::path& features_path,
                const fs::path& out_path) {
    const json mj = load_json_file(model_path);
    std::ifstream fin(features_path);
    if (!fin) throw DataError("cannot open " + features_path.string());
    const auto ds = windml::read_features(fin, features_path.stem().string());

    const auto kind = mj.at("model").get<std::string>();
    std::function<double(const windml::FeatureRow&)> predict;
    if (kind == "linear") {
        const auto m = windml::linear_from_json(mj);
        predict = [m](const windml::FeatureRow& r) { return m.predict(r); };
    } else if (kind == "sigmoid") {
        const auto m = windml::sigmoid_from_json(mj);
        predict = [m](const windml::FeatureRow& r) { return m.predict(r); };
    } else if (kind == "forest") {
        const auto m = windml::forest_from_json(mj);
        const auto fs_tag = mj.value("feature_set", "all_variables");
        const auto fset = parse_feature_set(fs_tag);
        predict = [m, fset](const windml::FeatureRow& r) {
            return m.predict(windml::features_of(r, fset));
        };
    } else if (kind == "tree") {
        const auto m = windml::tree_from_json(mj);
        const auto fset = parse_feature_set(mj.value("feature_set", "all_variables"));
        predict = [m, fset](const windml::FeatureRow& r) {
            return m.predict(windml::features_of(r, fset));
        };
    } else if (kind == "knn") {
        const auto m = windml::knn_from_json(mj);
        const auto fset = windml::detail::feature_set_from_json(mj.at("feature_set"));
        predict = [m, fset](const windml::FeatureRow& r) { return m.predict(r, fset); };
    } else if (kind == "svr") {
        const auto m = windml::svr_from_json(mj);
        const auto fset = windml::detail::feature_set_from_json(mj.at("feature_set"));
        predict = [m, fset](const windml::FeatureRow& r) { return m.predict(r, fset); };
    } else if (kind == "power_curve") {
        const auto curve = windml::power_curve_from_json(mj);
        predict = [curve](const windml::FeatureRow& r) {
            return windml::power_curve_predict(curve, r.w);
        };
    } else {
        throw ConfigError("unknown model kind '" + kind + "'");
    }

    std::ostringstream out;
    out << "timestamp,predicted_power_kw\n";
    for (const auto& r : ds.rows)
        out << windml::detail::format_iso8601_utc(r.timestamp) << ','
            << windml::detail::fmt_double(predict(r), "%.10g") << '\n';
    write_text_file(out_path, out.str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"wind-farm power modeling toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = "out", scada_path, model_path, features_path,
                predictions_path = "predictions.csv";
    std::uint64_t seed_value = 0;
    bool seed_set = false;
    int jobs = 1;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "experiment config JSON")->required();
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed_value, "master seed override")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--jobs", jobs, "parallel workers")->check(CLI::PositiveNumber);
    };

    auto* synth = app.add_subcommand("synth", "generate synthetic SCADA data");
    add_common(synth, true);
    auto* ingest = app.add_subcommand("ingest", "SCADA CSV to per-turbine feature CSVs");
    ingest->add_option("--scada", scada_path, "SCADA CSV input")->required();
    ingest->add_option("--out", out_dir, "output directory");
    auto* benchmark = app.add_subcommand("benchmark", "run the method comparison");
    add_common(benchmark, true);
    auto* stability = app.add_subcommand("stability", "local vs farm-averaged inputs");
    add_common(stability, true);
    auto* plotdata = app.add_subcommand("plotdata", "emit plot-ready CSV data");
    add_common(plotdata, true);
    auto* predict = app.add_subcommand("predict", "predict from a saved model JSON");
    predict->add_option("--model", model_path, "model JSON")->required();
    predict->add_option("--features", features_path, "feature CSV")->required();
    predict->add_option("--out", predictions_path, "predictions CSV path");

    CLI11_PARSE(app, argc, argv);

    const std::optional<std::uint64_t> seed =
        seed_set ? std::optional<std::uint64_t>(seed_value) : std::nullopt;
    try {
        if (synth->parsed()) return cmd_synth(config_path, out_dir, seed, jobs);
        if (ingest->parsed()) return cmd_ingest(scada_path, out_dir);
        if (benchmark->parsed()) return cmd_benchmark(config_path, out_dir, seed, jobs);
        if (stability->parsed()) return cmd_stability(config_path, out_dir, seed, jobs);
        if (plotdata->parsed()) return cmd_plotdata(config_path, out_dir, seed, jobs);
        if (predict->parsed()) return cmd_predict(model_path, features_path, predictions_path);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kExitDataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumericalError;
    }
    return kExitOk;
}

// triosc_main.cpp — Command-line explorer for the three-oscillator common-bath
// chain: mode reports, NS checks, tuning, propagation, and parameter sweeps.
//
// All inputs are in units with omega_2 = 1 (frequencies) and the matching
// frequency-squared units for couplings, as used throughout the outputs.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "triosc/sweep.hpp"

namespace {

using nlohmann::json;
using namespace triosc;

// Configuration file loading: a flat JSON object whose keys equal the long
// option names. A run manifest is also accepted (its "config" object is used),
// so a file can be reproduced directly from its side-car manifest.
json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError("config file " + path + ": " + e.what());
    }
    if (j.contains("config") && j["config"].is_object()) j = j["config"];
    if (!j.is_object()) throw ConfigError("config file " + path + ": expected a JSON object");
    return j;
}

// Pre-scan argv for --config so file values become option defaults; explicit
// flags then override them during normal parsing.
json preload_config(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return load_config_file(argv[i + 1]);
        if (a.rfind("--config=", 0) == 0) return load_config_file(a.substr(9));
    }
    return json::object();
}

template <typename T>
void apply_default(const json& cfg, const std::string& key, T& value) {
    if (!cfg.contains(key)) return;
    try {
        value = cfg.at(key).get<T>();
    } catch (const std::exception& e) {
        throw ConfigError("config key '" + key + "': " + e.what());
    }
}

struct CommonOpts {
    std::string output;
    std::string format{"csv"};
    std::string config_path; // consumed by preload, registered so CLI11 accepts it
    int threads{1};
};

void add_common(CLI::App* cmd, const json& cfg, CommonOpts& c) {
    apply_default(cfg, "output", c.output);
    apply_default(cfg, "format", c.format);
    apply_default(cfg, "threads", c.threads);
    cmd->add_option("-o,--output", c.output, "Output file (stdout when omitted)");
    cmd->add_option("--format", c.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--threads", c.threads, "Worker threads for sweeps")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--config", c.config_path, "JSON config file (flags override file values)");
}

struct ParamOpts {
    double w1sq{1.69}, w2sq{1.0}, w3sq{1.69};
    double l12{0.4}, l13{0.0}, l23{0.4};
    std::vector<double> weights{1.0, 1.0, 1.0};

    SystemParams params() const {
        if (weights.size() != 3) throw ConfigError("weights: expected 3 values");
        SystemParams p;
        p.omega_sq = {w1sq, w2sq, w3sq};
        p.l12 = l12;
        p.l13 = l13;
        p.l23 = l23;
        p.bath_weights = {weights[0], weights[1], weights[2]};
        return p;
    }
};

void add_params(CLI::App* cmd, const json& cfg, ParamOpts& p) {
    apply_default(cfg, "w1sq", p.w1sq);
    apply_default(cfg, "w2sq", p.w2sq);
    apply_default(cfg, "w3sq", p.w3sq);
    apply_default(cfg, "l12", p.l12);
    apply_default(cfg, "l13", p.l13);
    apply_default(cfg, "l23", p.l23);
    apply_default(cfg, "weights", p.weights);
    cmd->add_option("--w1sq", p.w1sq, "Squared frequency w1^2");
    cmd->add_option("--w2sq", p.w2sq, "Squared frequency w2^2");
    cmd->add_option("--w3sq", p.w3sq, "Squared frequency w3^2");
    cmd->add_option("--l12", p.l12, "Coupling lambda_12");
    cmd->add_option("--l13", p.l13, "Coupling lambda_13");
    cmd->add_option("--l23", p.l23, "Coupling lambda_23");
    cmd->add_option("--weights", p.weights, "Per-oscillator bath weights g1 g2 g3")
        ->expected(3);
}

struct BathOpts {
    double temperature{10.0}, gamma{0.07}, cutoff{50.0};
    BathParams bath() const { return BathParams{temperature, gamma, cutoff}; }
};

void add_bath(CLI::App* cmd, const json& cfg, BathOpts& b) {
    apply_default(cfg, "temperature", b.temperature);
    apply_default(cfg, "gamma", b.gamma);
    apply_default(cfg, "cutoff", b.cutoff);
    cmd->add_option("-T,--temperature", b.temperature, "Bath temperature (k_B = 1)");
    cmd->add_option("--gamma", b.gamma, "System-bath coupling strength");
    cmd->add_option("--cutoff", b.cutoff, "Sharp Ohmic cutoff frequency");
}

struct SqueezeOpts {
    std::vector<double> r{2.0, 2.5, 3.0};
    std::array<double, 3> array() const {
        if (r.size() != 3) throw ConfigError("r: expected 3 values");
        return {r[0], r[1], r[2]};
    }
};

void add_squeeze(CLI::App* cmd, const json& cfg, SqueezeOpts& s) {
    apply_default(cfg, "r", s.r);
    cmd->add_option("-r,--r", s.r, "Initial squeezing r1 r2 r3")->expected(3);
}

void add_axis(CLI::App* cmd, const json& cfg, const std::string& prefix, AxisSpec& axis) {
    std::string scale = axis.log_scale ? "log" : "linear";
    apply_default(cfg, prefix + "-min", axis.min);
    apply_default(cfg, prefix + "-max", axis.max);
    apply_default(cfg, prefix + "-steps", axis.steps);
    apply_default(cfg, prefix + "-scale", scale);
    cmd->add_option("--" + prefix + "-min", axis.min, "Axis minimum");
    cmd->add_option("--" + prefix + "-max", axis.max, "Axis maximum");
    cmd->add_option("--" + prefix + "-steps", axis.steps, "Grid points (>= 2)");
    cmd->add_option_function<std::string>(
           "--" + prefix + "-scale",
           [&axis](const std::string& v) { axis.log_scale = (v == "log"); },
           "Axis scale: linear or log")
        ->check(CLI::IsMember({"linear", "log"}))
        ->default_val(scale)
        ->force_callback();
}

// Writes the table (and manifest when a file is produced) or prints to stdout.
void emit(const CsvTable& table, const CommonOpts& common, const std::string& command,
          const json& resolved, const json& grid, double seconds,
          const std::vector<std::pair<std::string, const CsvTable*>>& extra = {}) {
    const std::string body = common.format == "json" ? table.to_json() : table.to_csv();
    if (common.output.empty()) {
        std::cout << body;
        return;
    }
    RunManifest manifest;
    manifest.command = command;
    manifest.config = resolved;
    manifest.grid = grid;
    manifest.wall_seconds = seconds;
    manifest.outputs.push_back(common.output);
    write_text_file(common.output, body);
    for (const auto& [suffix, t] : extra) {
        const std::string path = common.output + suffix;
        write_text_file(path, common.format == "json" ? t->to_json() : t->to_csv());
        manifest.outputs.push_back(path);
    }
    write_text_file(common.output + ".manifest.json", manifest.to_json().dump(1) + "\n");
}

json params_json(const ParamOpts& p) {
    return json{{"w1sq", p.w1sq}, {"w2sq", p.w2sq}, {"w3sq", p.w3sq},
                {"l12", p.l12},   {"l13", p.l13},   {"l23", p.l23},
                {"weights", p.weights}};
}

json bath_json(const BathOpts& b) {
    return json{{"temperature", b.temperature}, {"gamma", b.gamma}, {"cutoff", b.cutoff}};
}

json common_json(const CommonOpts& c) {
    return json{{"output", c.output}, {"format", c.format}, {"threads", c.threads}};
}

json axis_json(const std::string& prefix, const AxisSpec& a) {
    return json{{prefix + "-min", a.min},
                {prefix + "-max", a.max},
                {prefix + "-steps", a.steps},
                {prefix + "-scale", a.log_scale ? "log" : "linear"}};
}

void merge(json& into, const json& from) {
    for (auto it = from.begin(); it != from.end(); ++it) into[it.key()] = it.value();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"triosc — three coupled oscillators in a common thermal bath"};
    app.require_subcommand(1);
    app.footer("All frequencies are in units of omega_2 = 1; couplings and squared\n"
               "frequencies in omega_2^2. CSV outputs use a header row, '.' decimals\n"
               "and LF line endings; every file gets a <name>.manifest.json side-car.");

    json cfg;
    try {
        cfg = preload_config(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    // modes -----------------------------------------------------------------
    auto* modes_cmd = app.add_subcommand("modes", "Normal modes, couplings and decay ratio");
    CommonOpts modes_common;
    ParamOpts modes_params;
    add_common(modes_cmd, cfg, modes_common);
    add_params(modes_cmd, cfg, modes_params);

    // ns-check ----------------------------------------------------------------
    auto* ns_cmd = app.add_subcommand("ns-check", "Noiseless-subsystem report");
    CommonOpts ns_common;
    ParamOpts ns_params;
    add_common(ns_cmd, cfg, ns_common);
    add_params(ns_cmd, cfg, ns_params);

    // tune --------------------------------------------------------------------
    auto* tune_cmd = app.add_subcommand("tune", "Solve a tuned parameter onto an NS manifold");
    CommonOpts tune_common;
    ParamOpts tune_params;
    std::string tune_target{"omega2"};
    apply_default(cfg, "target", tune_target);
    add_common(tune_cmd, cfg, tune_common);
    add_params(tune_cmd, cfg, tune_params);
    tune_cmd->add_option("--target", tune_target, "omega2, lambda0 or lambda-pm")
        ->check(CLI::IsMember({"omega2", "lambda0", "lambda-pm"}));

    // evolve --------------------------------------------------------------------
    auto* evolve_cmd = app.add_subcommand("evolve", "Propagate to one time, dump the state");
    CommonOpts evolve_common;
    ParamOpts evolve_params;
    BathOpts evolve_bath;
    SqueezeOpts evolve_r;
    double evolve_time{10.0};
    std::string evolve_basis{"natural"};
    apply_default(cfg, "time", evolve_time);
    apply_default(cfg, "basis", evolve_basis);
    add_common(evolve_cmd, cfg, evolve_common);
    add_params(evolve_cmd, cfg, evolve_params);
    add_bath(evolve_cmd, cfg, evolve_bath);
    add_squeeze(evolve_cmd, cfg, evolve_r);
    evolve_cmd->add_option("--time", evolve_time, "Evolution time");
    evolve_cmd->add_option("--basis", evolve_basis, "Output basis: natural or normal")
        ->check(CLI::IsMember({"natural", "normal"}));

    // phase-diagram -----------------------------------------------------------
    auto* phase_cmd =
        app.add_subcommand("phase-diagram", "Asymptotic entanglement phases over (r, T)");
    CommonOpts phase_common;
    ParamOpts phase_params;
    PhaseDiagramConfig phase_cfg;
    phase_cfg.r_axis = {0.0, 1.5, 200, false};
    phase_cfg.temperature_axis = {0.01, 10.0, 200, false};
    apply_default(cfg, "torus-grid", phase_cfg.torus_grid);
    add_common(phase_cmd, cfg, phase_common);
    add_params(phase_cmd, cfg, phase_params);
    add_axis(phase_cmd, cfg, "r", phase_cfg.r_axis);
    add_axis(phase_cmd, cfg, "T", phase_cfg.temperature_axis);
    phase_cmd->add_option("--torus-grid", phase_cfg.torus_grid,
                          "Scan resolution for the two-mode numeric extremization");

    // decay-map -----------------------------------------------------------------
    auto* decay_cmd = app.add_subcommand("decay-map", "Decay-rate ratio over (omega1, omega3)");
    CommonOpts decay_common;
    DecayMapConfig decay_cfg;
    double decay_w2sq{1.0};
    apply_default(cfg, "w2sq", decay_w2sq);
    apply_default(cfg, "lambda", decay_cfg.lambda);
    add_common(decay_cmd, cfg, decay_common);
    add_axis(decay_cmd, cfg, "x", decay_cfg.omega1_axis);
    add_axis(decay_cmd, cfg, "y", decay_cfg.omega3_axis);
    decay_cmd->add_option("--w2sq", decay_w2sq, "Central squared frequency w2^2");
    decay_cmd->add_option("--lambda", decay_cfg.lambda, "Equal couplings l12 = l23 (l13 = 0)");

    // sync-map -------------------------------------------------------------------
    auto* sync_cmd =
        app.add_subcommand("sync-map", "Synchronization indicator |C| over (omega1, omega3)");
    CommonOpts sync_common;
    BathOpts sync_bath;
    SqueezeOpts sync_r;
    SyncMapConfig sync_cfg;
    double sync_w2sq{1.0};
    std::vector<int> sync_pair{1, 3};
    apply_default(cfg, "w2sq", sync_w2sq);
    apply_default(cfg, "lambda", sync_cfg.lambda);
    apply_default(cfg, "pair", sync_pair);
    apply_default(cfg, "window", sync_cfg.window);
    apply_default(cfg, "t-eval-max", sync_cfg.t_eval_max);
    apply_default(cfg, "dt", sync_cfg.dt);
    add_common(sync_cmd, cfg, sync_common);
    add_bath(sync_cmd, cfg, sync_bath);
    add_squeeze(sync_cmd, cfg, sync_r);
    add_axis(sync_cmd, cfg, "x", sync_cfg.omega1_axis);
    add_axis(sync_cmd, cfg, "y", sync_cfg.omega3_axis);
    sync_cmd->add_option("--w2sq", sync_w2sq, "Central squared frequency w2^2");
    sync_cmd->add_option("--lambda", sync_cfg.lambda, "Equal couplings l12 = l23 (l13 = 0)");
    sync_cmd->add_option("--pair", sync_pair, "Oscillator pair i j")->expected(2);
    sync_cmd->add_option("--window", sync_cfg.window, "Indicator window Delta t");
    sync_cmd->add_option("--t-eval-max", sync_cfg.t_eval_max,
                         "Evaluation time cap t = min(t_eval_max, 1/Gamma_0)");
    sync_cmd->add_option("--dt", sync_cfg.dt, "Series sampling step");

    // series ----------------------------------------------------------------------
    auto* series_cmd = app.add_subcommand("series", "Observable time series");
    CommonOpts series_common;
    ParamOpts series_params;
    BathOpts series_bath;
    SqueezeOpts series_r;
    SeriesConfig series_cfg;
    std::vector<std::string> series_obs{"q2_1", "q2_2", "q2_3"};
    apply_default(cfg, "t-max", series_cfg.t_max);
    apply_default(cfg, "dt", series_cfg.dt);
    apply_default(cfg, "observables", series_obs);
    apply_default(cfg, "smooth", series_cfg.smooth);
    apply_default(cfg, "smooth-width", series_cfg.smooth_width);
    add_common(series_cmd, cfg, series_common);
    add_params(series_cmd, cfg, series_params);
    add_bath(series_cmd, cfg, series_bath);
    add_squeeze(series_cmd, cfg, series_r);
    series_cmd->add_option("--t-max", series_cfg.t_max, "Final time");
    series_cmd->add_option("--dt", series_cfg.dt, "Sampling step");
    series_cmd->add_option("--observables", series_obs,
                           "Observables: q2_i, p2_i, en_ij, discord_ij");
    series_cmd->add_flag("--smooth", series_cfg.smooth, "Append Gaussian-smoothed columns");
    series_cmd->add_option("--smooth-width", series_cfg.smooth_width, "Smoothing kernel width");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto t0 = std::chrono::steady_clock::now();
        auto seconds = [&t0] {
            return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };

        if (*modes_cmd) {
            const CsvTable t = make_modes_table(modes_params.params());
            json resolved = params_json(modes_params);
            merge(resolved, common_json(modes_common));
            emit(t, modes_common, "modes", resolved, json(), seconds());
        } else if (*ns_cmd) {
            const CsvTable t = make_ns_report_table(ns_params.params());
            json resolved = params_json(ns_params);
            merge(resolved, common_json(ns_common));
            emit(t, ns_common, "ns-check", resolved, json(), seconds());
        } else if (*tune_cmd) {
            const CsvTable t = make_tune_table(tune_params.params(), tune_target);
            json resolved = params_json(tune_params);
            resolved["target"] = tune_target;
            merge(resolved, common_json(tune_common));
            emit(t, tune_common, "tune", resolved, json(), seconds());
        } else if (*evolve_cmd) {
            const CsvTable t = make_evolve_table(evolve_params.params(), evolve_bath.bath(),
                                                 evolve_r.array(), evolve_time, evolve_basis);
            json resolved = params_json(evolve_params);
            merge(resolved, bath_json(evolve_bath));
            resolved["r"] = evolve_r.r;
            resolved["time"] = evolve_time;
            resolved["basis"] = evolve_basis;
            merge(resolved, common_json(evolve_common));
            emit(t, evolve_common, "evolve", resolved, json(), seconds());
        } else if (*phase_cmd) {
            phase_cfg.params = phase_params.params();
            phase_cfg.threads = phase_common.threads;
            const CsvTable t = run_phase_diagram(phase_cfg);
            json resolved = params_json(phase_params);
            merge(resolved, axis_json("r", phase_cfg.r_axis));
            merge(resolved, axis_json("T", phase_cfg.temperature_axis));
            resolved["torus-grid"] = phase_cfg.torus_grid;
            merge(resolved, common_json(phase_common));
            emit(t, phase_common, "phase-diagram", resolved,
                 json{{"rows", phase_cfg.r_axis.steps * phase_cfg.temperature_axis.steps},
                      {"r_steps", phase_cfg.r_axis.steps},
                      {"T_steps", phase_cfg.temperature_axis.steps}},
                 seconds());
        } else if (*decay_cmd) {
            decay_cfg.omega2_sq = decay_w2sq;
            decay_cfg.threads = decay_common.threads;
            const DecayMapResult result = run_decay_map(decay_cfg);
            json resolved{{"w2sq", decay_w2sq}, {"lambda", decay_cfg.lambda}};
            merge(resolved, axis_json("x", decay_cfg.omega1_axis));
            merge(resolved, axis_json("y", decay_cfg.omega3_axis));
            merge(resolved, common_json(decay_common));
            emit(result.grid, decay_common, "decay-map", resolved,
                 json{{"x_steps", decay_cfg.omega1_axis.steps},
                      {"y_steps", decay_cfg.omega3_axis.steps}},
                 seconds(), {{".overlays.csv", &result.overlays}});
        } else if (*sync_cmd) {
            sync_cfg.omega2_sq = sync_w2sq;
            sync_cfg.bath = sync_bath.bath();
            sync_cfg.r = sync_r.array();
            if (sync_pair.size() != 2) throw ConfigError("pair: expected 2 indices");
            sync_cfg.pair_i = sync_pair[0];
            sync_cfg.pair_j = sync_pair[1];
            sync_cfg.threads = sync_common.threads;
            const CsvTable t = run_sync_map(sync_cfg);
            json resolved{{"w2sq", sync_w2sq},
                          {"lambda", sync_cfg.lambda},
                          {"pair", sync_pair},
                          {"window", sync_cfg.window},
                          {"t-eval-max", sync_cfg.t_eval_max},
                          {"dt", sync_cfg.dt},
                          {"r", sync_r.r}};
            merge(resolved, bath_json(sync_bath));
            merge(resolved, axis_json("x", sync_cfg.omega1_axis));
            merge(resolved, axis_json("y", sync_cfg.omega3_axis));
            merge(resolved, common_json(sync_common));
            emit(t, sync_common, "sync-map", resolved,
                 json{{"x_steps", sync_cfg.omega1_axis.steps},
                      {"y_steps", sync_cfg.omega3_axis.steps}},
                 seconds());
        } else if (*series_cmd) {
            series_cfg.params = series_params.params();
            series_cfg.bath = series_bath.bath();
            series_cfg.r = series_r.array();
            series_cfg.threads = series_common.threads;
            series_cfg.observables.clear();
            for (const auto& name : series_obs)
                series_cfg.observables.push_back(parse_observable(name));
            const CsvTable t = run_series(series_cfg);
            json resolved = params_json(series_params);
            merge(resolved, bath_json(series_bath));
            resolved["r"] = series_r.r;
            resolved["t-max"] = series_cfg.t_max;
            resolved["dt"] = series_cfg.dt;
            resolved["observables"] = series_obs;
            resolved["smooth"] = series_cfg.smooth;
            resolved["smooth-width"] = series_cfg.smooth_width;
            merge(resolved, common_json(series_common));
            emit(t, series_common, "series", resolved, json(), seconds());
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}

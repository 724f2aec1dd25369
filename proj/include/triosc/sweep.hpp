// sweep.hpp — Experiment runners behind the command-line tool: axis grids,
// observable series, phase/decay/sync maps, CSV/JSON tables and run manifests.

#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "triosc/asymptotics.hpp"
#include "triosc/correlations.hpp"
#include "triosc/dynamics.hpp"
#include "triosc/errors.hpp"
#include "triosc/ns.hpp"
#include "triosc/system.hpp"
#include "triosc/timeseries.hpp"
#include "triosc/version.hpp"

namespace triosc {

// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return std::string(buf);
}

// Rectangular output table. Cells are preformatted strings so that identical
// runs produce byte-identical files regardless of parallelism.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::string to_csv() const {
        std::string out;
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += columns[c];
        }
        out += '\n';
        for (const auto& row : rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out += ',';
                out += row[c];
            }
            out += '\n';
        }
        return out;
    }

    std::string to_json() const {
        nlohmann::json j;
        j["columns"] = columns;
        j["rows"] = rows;
        return j.dump(1) + "\n";
    }
};

struct AxisSpec {
    double min{0.0};
    double max{1.0};
    int steps{2};
    bool log_scale{false};

    void validate(const char* name) const {
        if (steps < 2) throw ConfigError(std::string(name) + ": steps must be >= 2");
        if (!(max > min)) throw ConfigError(std::string(name) + ": max must exceed min");
        if (log_scale && !(min > 0.0))
            throw ConfigError(std::string(name) + ": log axis requires min > 0");
    }
    std::vector<double> grid() const {
        std::vector<double> g(static_cast<std::size_t>(steps));
        if (log_scale) {
            const double a = std::log(min), b = std::log(max);
            for (int i = 0; i < steps; ++i)
                g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (steps - 1));
        } else {
            for (int i = 0; i < steps; ++i)
                g[static_cast<std::size_t>(i)] = min + (max - min) * i / (steps - 1);
        }
        return g;
    }
};

// Deterministic work distribution: any thread count yields identical results
// because cell i always writes slot i.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 2) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mutex);
                    if (!first_error) first_error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

// ------------------------------- observables --------------------------------

enum class ObservableKind { q2, p2, en, discord };

struct Observable {
    ObservableKind kind{ObservableKind::q2};
    int i{1};
    int j{3};

    std::string name() const {
        switch (kind) {
            case ObservableKind::q2: return "q2_" + std::to_string(i);
            case ObservableKind::p2: return "p2_" + std::to_string(i);
            case ObservableKind::en:
                return "en_" + std::to_string(i) + std::to_string(j);
            default:
                return "discord_" + std::to_string(i) + std::to_string(j);
        }
    }
};

// Accepted forms: q2_1..q2_3, p2_1..p2_3, en_ij, discord_ij with i<j in 12|13|23.
inline Observable parse_observable(const std::string& text) {
    auto pair_of = [&](const std::string& suffix) {
        if (suffix.size() != 2 || suffix[0] < '1' || suffix[0] > '3' || suffix[1] < '1' ||
            suffix[1] > '3' || suffix[0] >= suffix[1])
            throw ConfigError("observable '" + text + "': pair must be one of 12, 13, 23");
        return std::pair<int, int>{suffix[0] - '0', suffix[1] - '0'};
    };
    Observable o;
    if (text.rfind("q2_", 0) == 0 || text.rfind("p2_", 0) == 0) {
        const std::string idx = text.substr(3);
        if (idx.size() != 1 || idx[0] < '1' || idx[0] > '3')
            throw ConfigError("observable '" + text + "': index must be 1, 2 or 3");
        o.kind = text[0] == 'q' ? ObservableKind::q2 : ObservableKind::p2;
        o.i = idx[0] - '0';
        return o;
    }
    if (text.rfind("en_", 0) == 0) {
        auto [i, j] = pair_of(text.substr(3));
        o.kind = ObservableKind::en;
        o.i = i;
        o.j = j;
        return o;
    }
    if (text.rfind("discord_", 0) == 0) {
        auto [i, j] = pair_of(text.substr(8));
        o.kind = ObservableKind::discord;
        o.i = i;
        o.j = j;
        return o;
    }
    throw ConfigError("unknown observable '" + text + "'");
}

// Precomputed propagation context; every time point is evaluated directly from
// t = 0 through the closed-form propagator.
struct Evolution {
    SystemParams params;
    BathParams bath;
    NormalModes modes;
    MmeCoefficients coeffs;
    GaussianState initial_normal;

    static Evolution make(const SystemParams& params, const BathParams& bath,
                          const std::array<double, 3>& r) {
        Evolution e;
        e.params = params;
        e.bath = bath;
        e.modes = normal_modes(params);
        e.coeffs = mme_coefficients(e.modes, bath);
        e.initial_normal =
            change_basis(squeezed_vacuum(params.omega_sq, r), e.modes, BasisTag::normal);
        return e;
    }

    GaussianState natural_at(double t) const {
        return change_basis(propagate(initial_normal, coeffs, t), modes, BasisTag::natural);
    }

    double smallest_decay_rate() const {
        double g = std::numeric_limits<double>::infinity();
        for (int n = 0; n < 3; ++n)
            g = std::min(g, coeffs.free_mode[n] ? 0.0 : coeffs.Gamma[n]);
        return g;
    }
};

inline double evaluate_observable(const GaussianState& natural, const Observable& o) {
    switch (o.kind) {
        case ObservableKind::q2: return natural.cov(o.i - 1, o.i - 1);
        case ObservableKind::p2: return natural.cov(o.i + 2, o.i + 2);
        case ObservableKind::en:
            return log_negativity(min_symplectic_eig(reduce_pair(natural, o.i, o.j)));
        default:
            return gaussian_discord(reduce_pair(natural, o.i, o.j), MeasuredParty::B);
    }
}

// --------------------------------- series -----------------------------------

struct SeriesConfig {
    SystemParams params;
    BathParams bath;                      // defaults T=10, gamma=0.07, cutoff=50
    std::array<double, 3> r{2.0, 2.5, 3.0};
    double t_max{200.0};
    double dt{0.02};
    std::vector<Observable> observables{{ObservableKind::q2, 1, 3},
                                        {ObservableKind::q2, 2, 3},
                                        {ObservableKind::q2, 3, 3}};
    bool smooth{false};
    double smooth_width{5.0};
    int threads{1};
};

inline CsvTable run_series(const SeriesConfig& cfg) {
    if (!(cfg.dt > 0.0) || !(cfg.t_max > 0.0))
        throw ConfigError("series: dt and t-max must be positive");
    if (cfg.observables.empty()) throw ConfigError("series: no observables requested");
    const Evolution evo = Evolution::make(cfg.params, cfg.bath, cfg.r);

    const int n = static_cast<int>(std::floor(cfg.t_max / cfg.dt)) + 1;
    const std::size_t m = cfg.observables.size();
    std::vector<double> times(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> data(m, std::vector<double>(static_cast<std::size_t>(n)));
    parallel_for(n, cfg.threads, [&](int k) {
        const double t = k * cfg.dt;
        times[static_cast<std::size_t>(k)] = t;
        const GaussianState nat = evo.natural_at(t);
        for (std::size_t c = 0; c < m; ++c)
            data[c][static_cast<std::size_t>(k)] = evaluate_observable(nat, cfg.observables[c]);
    });

    CsvTable table;
    table.columns.push_back("t");
    for (const auto& o : cfg.observables) table.columns.push_back(o.name());
    std::vector<std::vector<double>> smooth_data;
    if (cfg.smooth) {
        for (std::size_t c = 0; c < m; ++c) {
            table.columns.push_back(cfg.observables[c].name() + "_smooth");
            TimeSeries ts{times, data[c]};
            smooth_data.push_back(gaussian_smooth(ts, cfg.smooth_width).values);
        }
    }
    table.rows.reserve(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        std::vector<std::string> row;
        row.reserve(table.columns.size());
        row.push_back(format_double(times[static_cast<std::size_t>(k)]));
        for (std::size_t c = 0; c < m; ++c)
            row.push_back(format_double(data[c][static_cast<std::size_t>(k)]));
        if (cfg.smooth)
            for (std::size_t c = 0; c < m; ++c)
                row.push_back(format_double(smooth_data[c][static_cast<std::size_t>(k)]));
        table.rows.push_back(std::move(row));
    }
    return table;
}

// ------------------------------ phase diagram -------------------------------

struct PhaseDiagramConfig {
    SystemParams params;   // must sit on a one- or two-mode NS manifold
    AxisSpec r_axis{0.0, 1.5, 100, false};
    AxisSpec temperature_axis{0.01, 10.0, 100, false};
    int threads{1};
    int torus_grid{4096};  // theta scan for the two-mode numeric extremization
};

// Per-cell minimum entanglement and phase over (r, T). One-mode manifolds use
// the closed-form law and emit the critical-squeezing overlay columns; the
// two-mode manifold is extremized numerically and leaves the overlays empty.
inline CsvTable run_phase_diagram(const PhaseDiagramConfig& cfg) {
    cfg.r_axis.validate("r axis");
    cfg.temperature_axis.validate("T axis");
    const SystemParams& p = cfg.params;
    const double tol = 1e-9 * std::max({1.0, std::abs(p.omega_sq[0]), std::abs(p.omega_sq[1]),
                                        std::abs(p.omega_sq[2])});
    const NsReport report = ns_report(p);
    if (report.ns_mode_count < 1)
        throw NotOnManifold("phase-diagram: parameters are off every NS manifold (residual " +
                            format_double(report.residual) + ")");
    if (std::abs(p.l13) > tol || std::abs(p.omega_sq[0] - p.omega_sq[2]) > tol ||
        std::abs(p.l12 - p.l23) > tol)
        throw NotOnManifold(
            "phase-diagram: closed forms require the symmetric open chain (w1 = w3, l12 = l23, "
            "l13 = 0)");

    const bool two_mode = report.ns_mode_count >= 2;
    std::optional<OneModeNsSpec> one_spec;
    std::optional<TwoModeNsSpec> two_spec;
    const double w = std::sqrt(p.omega_sq[0]);
    const double w2 = std::sqrt(p.omega_sq[1]);
    if (two_mode)
        two_spec = TwoModeNsSpec::make(w, w2);
    else
        one_spec = OneModeNsSpec::make(w, w2, p.l12);

    const std::vector<double> rs = cfg.r_axis.grid();
    const std::vector<double> Ts = cfg.temperature_axis.grid();
    const int n = static_cast<int>(rs.size() * Ts.size());
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int cell) {
        const std::size_t ir = static_cast<std::size_t>(cell) / Ts.size();
        const std::size_t it = static_cast<std::size_t>(cell) % Ts.size();
        const double r = rs[ir], T = Ts[it];
        std::vector<std::string> row{format_double(r), format_double(T)};
        EntanglementLaw law;
        if (two_mode) {
            law = two_mode_entanglement_law(*two_spec, r, T, cfg.torus_grid);
        } else {
            law = one_mode_entanglement_law(*one_spec, r, T);
        }
        row.push_back(format_double(law.e0));
        row.push_back(format_double(law.delta_e));
        row.push_back(to_string(phase_classify(law.e0, law.delta_e)));
        if (!two_mode) {
            const auto c = critical_squeezings(*one_spec, T);
            row.push_back(format_double(c.r0_plus));
            row.push_back(format_double(c.r0_minus));
            row.push_back(format_double(2.0 * c.r_c));
            row.push_back(format_double((c.r0_plus - c.r0_minus) / 2.0));
        } else {
            row.insert(row.end(), 4, std::string());
        }
        rows[static_cast<std::size_t>(cell)] = std::move(row);
    });

    CsvTable table;
    table.columns = {"r", "T", "E0", "dE", "phase", "r0_plus", "r0_minus", "two_rc", "half_gap"};
    table.rows = std::move(rows);
    return table;
}

// -------------------------------- decay map ---------------------------------

struct DecayMapConfig {
    double omega2_sq{1.0};
    double lambda{0.4};    // l12 = l23, open chain (l13 = 0)
    AxisSpec omega1_axis{1.0, 2.0, 200, false}; // frequency (not squared)
    AxisSpec omega3_axis{1.0, 2.0, 200, false};
    std::array<double, 3> bath_weights{1.0, 1.0, 1.0};
    int threads{1};
};

struct DecayMapResult {
    CsvTable grid;
    CsvTable overlays;
};

inline DecayMapResult run_decay_map(const DecayMapConfig& cfg) {
    cfg.omega1_axis.validate("omega1 axis");
    cfg.omega3_axis.validate("omega3 axis");
    const std::vector<double> w1s = cfg.omega1_axis.grid();
    const std::vector<double> w3s = cfg.omega3_axis.grid();
    const int n = static_cast<int>(w1s.size() * w3s.size());
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int cell) {
        const std::size_t i1 = static_cast<std::size_t>(cell) / w3s.size();
        const std::size_t i3 = static_cast<std::size_t>(cell) % w3s.size();
        SystemParams p;
        p.omega_sq = {w1s[i1] * w1s[i1], cfg.omega2_sq, w3s[i3] * w3s[i3]};
        p.l12 = p.l23 = cfg.lambda;
        p.l13 = 0.0;
        p.bath_weights = cfg.bath_weights;
        std::string rcell;
        try {
            rcell = format_double(decay_ratio(normal_modes(p)));
        } catch (const PositivityError&) {
            rcell.clear(); // unbound cell, left empty
        }
        rows[static_cast<std::size_t>(cell)] = {format_double(w1s[i1]), format_double(w3s[i3]),
                                                std::move(rcell)};
    });

    DecayMapResult out;
    out.grid.columns = {"omega1", "omega3", "R"};
    out.grid.rows = std::move(rows);

    out.overlays.columns = {"curve", "omega1", "omega3"};
    for (double w1 : w1s)
        out.overlays.rows.push_back({"diagonal", format_double(w1), format_double(w1)});
    for (double w1 : w1s) {
        const double d = w1 * w1 - cfg.omega2_sq;
        if (std::abs(d) < 1e-12) continue;
        const double w3sq = cfg.omega2_sq + cfg.lambda * cfg.lambda / d;
        if (w3sq <= 0.0) continue;
        const double w3 = std::sqrt(w3sq);
        if (w3 < w3s.front() || w3 > w3s.back()) continue;
        out.overlays.rows.push_back({"hyperbola", format_double(w1), format_double(w3)});
    }
    return out;
}

// --------------------------------- sync map ---------------------------------

struct SyncMapConfig {
    double omega2_sq{1.0};
    double lambda{0.4};
    AxisSpec omega1_axis{1.0, 2.0, 50, false};
    AxisSpec omega3_axis{1.0, 2.0, 50, false};
    BathParams bath;
    std::array<double, 3> r{2.0, 2.5, 3.0};
    int pair_i{1};
    int pair_j{3};
    double t_eval_max{5000.0}; // evaluation time is min(t_eval_max, 1/Gamma_0)
    double window{15.0};
    double dt{0.02};
    int threads{1};
};

// |C| of <q_i^2> vs <q_j^2> over [t_eval, t_eval + window] per grid cell.
inline CsvTable run_sync_map(const SyncMapConfig& cfg) {
    cfg.omega1_axis.validate("omega1 axis");
    cfg.omega3_axis.validate("omega3 axis");
    if (cfg.pair_i < 1 || cfg.pair_i > 3 || cfg.pair_j < 1 || cfg.pair_j > 3 ||
        cfg.pair_i == cfg.pair_j)
        throw ConfigError("sync-map: pair must be two distinct oscillators in {1,2,3}");
    if (!(cfg.dt > 0.0) || !(cfg.window > 0.0) || !(cfg.t_eval_max > 0.0))
        throw ConfigError("sync-map: dt, window and t-eval-max must be positive");

    const std::vector<double> w1s = cfg.omega1_axis.grid();
    const std::vector<double> w3s = cfg.omega3_axis.grid();
    const int n = static_cast<int>(w1s.size() * w3s.size());
    std::vector<std::vector<std::string>> rows(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int cell) {
        const std::size_t i1 = static_cast<std::size_t>(cell) / w3s.size();
        const std::size_t i3 = static_cast<std::size_t>(cell) % w3s.size();
        SystemParams p;
        p.omega_sq = {w1s[i1] * w1s[i1], cfg.omega2_sq, w3s[i3] * w3s[i3]};
        p.l12 = p.l23 = cfg.lambda;
        p.l13 = 0.0;
        std::vector<std::string> row{format_double(w1s[i1]), format_double(w3s[i3])};
        try {
            const Evolution evo = Evolution::make(p, cfg.bath, cfg.r);
            const double g0 = evo.smallest_decay_rate();
            const double t_eval = g0 > 0.0 ? std::min(cfg.t_eval_max, 1.0 / g0) : cfg.t_eval_max;
            const int steps = static_cast<int>(std::ceil(cfg.window / cfg.dt)) + 1;
            TimeSeries h, g;
            h.times.resize(static_cast<std::size_t>(steps));
            h.values.resize(static_cast<std::size_t>(steps));
            g.times.resize(static_cast<std::size_t>(steps));
            g.values.resize(static_cast<std::size_t>(steps));
            for (int k = 0; k < steps; ++k) {
                const double t = t_eval + k * cfg.dt;
                const GaussianState nat = evo.natural_at(t);
                h.times[static_cast<std::size_t>(k)] = t;
                g.times[static_cast<std::size_t>(k)] = t;
                h.values[static_cast<std::size_t>(k)] = nat.cov(cfg.pair_i - 1, cfg.pair_i - 1);
                g.values[static_cast<std::size_t>(k)] = nat.cov(cfg.pair_j - 1, cfg.pair_j - 1);
            }
            const std::optional<double> c = sync_indicator(h, g, t_eval, cfg.window);
            if (c) {
                row.push_back(format_double(std::abs(*c)));
                row.push_back("1");
            } else {
                row.push_back(std::string());
                row.push_back("0");
            }
            row.push_back(format_double(t_eval));
        } catch (const PositivityError&) {
            row.insert(row.end(), {std::string(), "0", std::string()});
        }
        rows[static_cast<std::size_t>(cell)] = std::move(row);
    });

    CsvTable table;
    table.columns = {"omega1", "omega3", "abs_C", "defined", "t_eval"};
    table.rows = std::move(rows);
    return table;
}

// ----------------------------- single-shot tables ---------------------------

inline CsvTable make_modes_table(const SystemParams& p) {
    const NormalModes nm = normal_modes(p);
    CsvTable t;
    t.columns = {"Omega_1", "Omega_2", "Omega_3", "kappa_1", "kappa_2", "kappa_3", "R"};
    for (int i = 1; i <= 3; ++i)
        for (int n = 1; n <= 3; ++n)
            t.columns.push_back("F_" + std::to_string(i) + std::to_string(n));
    std::vector<std::string> row;
    for (int n = 0; n < 3; ++n) row.push_back(format_double(nm.Omega[n]));
    for (int n = 0; n < 3; ++n) row.push_back(format_double(nm.kappa[n]));
    row.push_back(format_double(decay_ratio(nm)));
    for (int i = 0; i < 3; ++i)
        for (int n = 0; n < 3; ++n) row.push_back(format_double(nm.F(i, n)));
    t.rows.push_back(std::move(row));
    return t;
}

inline CsvTable make_ns_report_table(const SystemParams& p) {
    const NsReport r = ns_report(p);
    CsvTable t;
    t.columns = {"kappa_1", "kappa_2", "kappa_3", "ns_mode_count", "config",
                 "residual_plus", "residual_minus", "Delta", "Sigma", "R_plus", "R_minus"};
    std::vector<std::string> row;
    for (int n = 0; n < 3; ++n) row.push_back(format_double(r.kappa[n]));
    row.push_back(std::to_string(r.ns_mode_count));
    row.push_back(to_string(r.config));
    if (r.dq.branches_real) {
        row.push_back(format_double(constraint_residual(p, Branch::plus)));
        row.push_back(format_double(constraint_residual(p, Branch::minus)));
    } else {
        row.push_back(std::string());
        row.push_back(std::string());
    }
    row.push_back(format_double(r.dq.Delta));
    row.push_back(format_double(r.dq.Sigma));
    if (r.dq.branches_real) {
        row.push_back(format_double(r.dq.R_plus));
        row.push_back(format_double(r.dq.R_minus));
    } else {
        row.push_back(std::string());
        row.push_back(std::string());
    }
    t.rows.push_back(std::move(row));
    return t;
}

// Tuned value(s) plus the re-validated protected frequency per branch.
inline CsvTable make_tune_table(const SystemParams& p, const std::string& target) {
    CsvTable t;
    t.columns = {"target", "branch", "value", "omega_protected_sq", "min_abs_kappa"};
    auto protected_mode = [](const SystemParams& q) {
        const NormalModes nm = normal_modes(q);
        int best = 0;
        for (int n = 1; n < 3; ++n)
            if (std::abs(nm.kappa[n]) < std::abs(nm.kappa[best])) best = n;
        return std::pair<double, double>{nm.omega_sq()[best], std::abs(nm.kappa[best])};
    };
    if (target == "omega2") {
        const double v = tuned_omega2_sq(p);
        SystemParams q = p;
        q.omega_sq[1] = v;
        auto [osq, kap] = protected_mode(q);
        t.rows.push_back({"omega2", "", format_double(v), format_double(osq), format_double(kap)});
    } else if (target == "lambda0") {
        const double v = tuned_lambda0(p);
        SystemParams q = p;
        q.l12 = q.l23 = v;
        auto [osq, kap] = protected_mode(q);
        t.rows.push_back({"lambda0", "", format_double(v), format_double(osq), format_double(kap)});
    } else if (target == "lambda-pm") {
        const auto v = tuned_lambda_pm(p);
        const char* names[2] = {"plus", "minus"};
        for (int b = 0; b < 2; ++b) {
            SystemParams q = p;
            q.l12 = q.l23 = v[static_cast<std::size_t>(b)];
            auto [osq, kap] = protected_mode(q);
            t.rows.push_back({"lambda-pm", names[b], format_double(v[static_cast<std::size_t>(b)]),
                              format_double(osq), format_double(kap)});
        }
    } else {
        throw ConfigError("tune: target must be omega2, lambda0 or lambda-pm");
    }
    return t;
}

inline CsvTable make_evolve_table(const SystemParams& p, const BathParams& bath,
                                  const std::array<double, 3>& r, double time,
                                  const std::string& basis) {
    if (basis != "natural" && basis != "normal")
        throw ConfigError("evolve: basis must be natural or normal");
    const Evolution evo = Evolution::make(p, bath, r);
    GaussianState state = propagate(evo.initial_normal, evo.coeffs, time);
    if (basis == "natural") state = change_basis(state, evo.modes, BasisTag::natural);

    CsvTable t;
    t.columns = {"t", "basis"};
    const char* mean_names[6] = {"q1", "q2", "q3", "p1", "p2", "p3"};
    for (const char* m : mean_names) t.columns.push_back(std::string("mean_") + m);
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j)
            t.columns.push_back("cov_" + std::to_string(i + 1) + std::to_string(j + 1));
    std::vector<std::string> row{format_double(time), basis};
    for (int i = 0; i < 6; ++i) row.push_back(format_double(state.mean[i]));
    for (int i = 0; i < 6; ++i)
        for (int j = i; j < 6; ++j) row.push_back(format_double(state.cov(i, j)));
    t.rows.push_back(std::move(row));
    return t;
}

// --------------------------------- manifest ---------------------------------

// Side-car record sufficient to reproduce an output file bit-exactly:
// rerunning the same subcommand with the embedded config yields the same bytes.
struct RunManifest {
    std::string command;
    nlohmann::json config;
    std::vector<std::string> outputs;
    nlohmann::json grid; // dimensions, when the run is a sweep
    double wall_seconds{0.0};

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool"] = "triosc";
        j["version"] = kVersion;
        j["command"] = command;
        j["config"] = config;
        j["outputs"] = outputs;
        if (!grid.is_null()) j["grid"] = grid;
        j["wall_seconds"] = wall_seconds;
        return j;
    }
};

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << content;
    if (!out) throw Error("failed writing output file: " + path);
}

// Exit-code policy of the CLI: 2 for validation problems, 3 for numerical ones.
inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const NumericalError*>(&e)) return 3;
    if (dynamic_cast<const Error*>(&e)) return 2;
    return 3;
}

} // namespace triosc

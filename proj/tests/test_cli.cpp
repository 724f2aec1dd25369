#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "triosc/sweep.hpp"

using namespace triosc;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path() / "triosc_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
    const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(TRIOSC_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WEXITSTATUS(status);
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

SyncMapConfig small_sync_cfg() {
    SyncMapConfig cfg;
    cfg.omega1_axis = {1.25, 1.35, 3, false};
    cfg.omega3_axis = {1.25, 1.35, 3, false};
    cfg.bath = BathParams{10.0, 0.07, 50.0};
    cfg.t_eval_max = 60.0;
    cfg.window = 15.0;
    cfg.dt = 0.05;
    return cfg;
}

} // namespace

TEST_CASE("format_double round-trips", "[cli]") {
    auto rng = testing::make_rng(61);
    std::uniform_real_distribution<double> d(-1e6, 1e6);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::pow(10.0, d(rng) / 2e5) * d(rng);
        REQUIRE(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
    REQUIRE(format_double(0.25) == "0.25");
    REQUIRE(format_double(1e300) == "1e+300");
}

TEST_CASE("axis grids", "[cli]") {
    AxisSpec lin{1.0, 2.0, 5, false};
    const auto g = lin.grid();
    REQUIRE(g.size() == 5);
    REQUIRE(g.front() == 1.0);
    REQUIRE(g.back() == 2.0);
    REQUIRE(g[2] == Catch::Approx(1.5));
    AxisSpec logax{0.1, 10.0, 3, true};
    const auto lg = logax.grid();
    REQUIRE(lg[1] == Catch::Approx(1.0).epsilon(1e-12));
    AxisSpec bad{1.0, 2.0, 1, false};
    REQUIRE_THROWS_AS(bad.validate("x"), ConfigError);
}

TEST_CASE("observable parsing", "[cli]") {
    REQUIRE(parse_observable("q2_2").name() == "q2_2");
    REQUIRE(parse_observable("p2_3").name() == "p2_3");
    REQUIRE(parse_observable("en_13").name() == "en_13");
    REQUIRE(parse_observable("discord_12").name() == "discord_12");
    REQUIRE_THROWS_AS(parse_observable("q2_4"), ConfigError);
    REQUIRE_THROWS_AS(parse_observable("en_31"), ConfigError);
    REQUIRE_THROWS_AS(parse_observable("bogus"), ConfigError);
}

TEST_CASE("series runner produces aligned deterministic columns", "[cli]") {
    SeriesConfig cfg;
    cfg.params.omega_sq = {1.69, 1.0, 1.69};
    cfg.params.l12 = cfg.params.l23 = 0.4;
    cfg.t_max = 5.0;
    cfg.dt = 0.05;
    cfg.observables = {parse_observable("q2_1"), parse_observable("en_13"),
                       parse_observable("discord_13")};
    cfg.smooth = true;
    cfg.smooth_width = 0.5;
    const CsvTable a = run_series(cfg);
    REQUIRE(a.columns ==
            std::vector<std::string>{"t", "q2_1", "en_13", "discord_13", "q2_1_smooth",
                                     "en_13_smooth", "discord_13_smooth"});
    REQUIRE(a.rows.size() == 101);
    cfg.threads = 4;
    const CsvTable b = run_series(cfg);
    REQUIRE(a.to_csv() == b.to_csv()); // byte-identical regardless of parallelism
}

TEST_CASE("phase diagram runner", "[cli]") {
    PhaseDiagramConfig cfg;
    cfg.params.omega_sq = {1.0, 1.44, 1.0};
    cfg.params.l12 = cfg.params.l23 = 0.6;
    cfg.r_axis = {0.0, 0.4, 5, false};
    cfg.temperature_axis = {0.01, 0.2, 4, false};

    SECTION("one-mode manifold uses the closed law") {
        const CsvTable t = run_phase_diagram(cfg);
        REQUIRE(t.rows.size() == 20);
        // cold unsqueezed corner: NSD with E0 near r0-
        REQUIRE(t.rows[0][4] == "NSD");
        REQUIRE(std::abs(std::strtod(t.rows[0][2].c_str(), nullptr) - 0.0478) < 2e-3);
        // r above r0+ is always NSD
        PhaseDiagramConfig hi = cfg;
        hi.r_axis = {1.0, 1.5, 3, false};
        for (const auto& row : run_phase_diagram(hi).rows) REQUIRE(row[4] == "NSD");
    }
    SECTION("two-mode manifold fills overlays with blanks") {
        PhaseDiagramConfig two = cfg;
        two.params.omega_sq = {1.69, 1.0, 1.69};
        two.params.l12 = two.params.l23 = 0.69;
        two.r_axis = {0.0, 0.2, 3, false};
        two.temperature_axis = {0.05, 0.1, 2, false};
        two.torus_grid = 512;
        const CsvTable t = run_phase_diagram(two);
        REQUIRE(t.rows[0][5].empty());
        REQUIRE(t.rows[0][4] == "NSD"); // cold unsqueezed two-mode chain
    }
    SECTION("off-manifold parameters are refused") {
        PhaseDiagramConfig off = cfg;
        off.params.omega_sq = {1.1, 1.7, 2.3};
        off.params.l12 = 0.2;
        off.params.l23 = 0.3;
        REQUIRE_THROWS_AS(run_phase_diagram(off), NotOnManifold);
    }
}

TEST_CASE("decay map runner", "[cli]") {
    DecayMapConfig cfg;
    cfg.omega1_axis = {1.0, 2.0, 11, false};
    cfg.omega3_axis = {1.0, 2.0, 11, false};
    const DecayMapResult res = run_decay_map(cfg);
    REQUIRE(res.grid.rows.size() == 121);
    double max_diag = 0.0, min_generic = 1e300;
    for (const auto& row : res.grid.rows) {
        const double w1 = std::strtod(row[0].c_str(), nullptr);
        const double w3 = std::strtod(row[1].c_str(), nullptr);
        const double R = std::strtod(row[2].c_str(), nullptr);
        if (w1 == w3) max_diag = std::max(max_diag, R);
        if (std::abs(w1 - w3) > 0.25) min_generic = std::min(min_generic, R);
    }
    REQUIRE(max_diag == 0.0); // exactly zero on the diagonal
    REQUIRE(min_generic > 1e-4);
    bool has_diag = false, has_hyp = false;
    for (const auto& row : res.overlays.rows) {
        has_diag |= row[0] == "diagonal";
        has_hyp |= row[0] == "hyperbola";
    }
    REQUIRE(has_diag);
    REQUIRE(has_hyp);
    SECTION("points on the hyperbola overlay have protected modes") {
        for (const auto& row : res.overlays.rows) {
            if (row[0] != "hyperbola") continue;
            const double w1 = std::strtod(row[1].c_str(), nullptr);
            const double w3 = std::strtod(row[2].c_str(), nullptr);
            SystemParams p;
            p.omega_sq = {w1 * w1, 1.0, w3 * w3};
            p.l12 = p.l23 = cfg.lambda;
            REQUIRE(decay_ratio(normal_modes(p)) < 1e-9);
        }
    }
}

TEST_CASE("sync map runner", "[cli]") {
    const CsvTable a = run_sync_map(small_sync_cfg());
    REQUIRE(a.columns.size() == 5);
    REQUIRE(a.rows.size() == 9);
    for (const auto& row : a.rows) {
        REQUIRE(row[3] == "1");
        const double c = std::strtod(row[2].c_str(), nullptr);
        REQUIRE(c >= 0.0);
        REQUIRE(c <= 1.0 + 1e-12);
    }
    SECTION("parallel evaluation is byte-identical") {
        SyncMapConfig cfg = small_sync_cfg();
        cfg.threads = 3;
        REQUIRE(run_sync_map(cfg).to_csv() == a.to_csv());
    }
}

TEST_CASE("exit-code mapping", "[cli]") {
    REQUIRE(exit_code_for(NotOnManifold("x")) == 2);
    REQUIRE(exit_code_for(CutoffViolation("x")) == 2);
    REQUIRE(exit_code_for(ConfigError("x")) == 2);
    REQUIRE(exit_code_for(PositivityError("x")) == 2);
    REQUIRE(exit_code_for(NumericalError("x")) == 3);
    REQUIRE(exit_code_for(std::runtime_error("x")) == 3);
}

TEST_CASE("cli binary end to end", "[cli]") {
    const fs::path dir = fs::temp_directory_path() / "triosc_cli_test";
    fs::create_directories(dir);

    SECTION("modes subcommand reports the protected mode") {
        const RunResult r = run_cli("modes --w1sq 1.69 --w2sq 1 --w3sq 1.69 --l12 0.4 --l23 0.4");
        REQUIRE(r.code == 0);
        REQUIRE(r.out.rfind("Omega_1,Omega_2,Omega_3,kappa_1", 0) == 0);
    }
    SECTION("ns-check labels the two-mode chain") {
        const RunResult r =
            run_cli("ns-check --w1sq 1.69 --w2sq 1 --w3sq 1.69 --l12 0.69 --l23 0.69");
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find(",2,e,") != std::string::npos);
    }
    SECTION("tune emits both lambda branches") {
        const RunResult r = run_cli(
            "tune --target lambda-pm --w1sq 1.44 --w2sq 1 --w3sq 1.69 --l12 0 --l23 0");
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("lambda-pm,plus,0.550999") != std::string::npos);
        REQUIRE(r.out.find("lambda-pm,minus,-0.550999") != std::string::npos);
    }
    SECTION("validation failures exit with code 2") {
        const RunResult off = run_cli(
            "phase-diagram --w1sq 1.1 --w2sq 1.7 --w3sq 2.3 --l12 0.2 --l23 0.3 "
            "--r-steps 2 --T-steps 2");
        REQUIRE(off.code == 2);
        REQUIRE(off.err.find("manifold") != std::string::npos);
        const RunResult cut = run_cli("evolve --cutoff 0.5 --time 1");
        REQUIRE(cut.code == 2);
        const RunResult pos = run_cli("modes --w1sq 1 --w2sq 1 --w3sq 1 --l12 -1 --l13 -1 --l23 -1");
        REQUIRE(pos.code == 2);
    }
    SECTION("json format and config files with flag overrides") {
        const fs::path cfg = dir / "series_cfg.json";
        std::ofstream(cfg) << R"({"w1sq":1.69,"w2sq":1.0,"w3sq":1.69,"l12":0.4,"l23":0.4,
            "t-max":2.0,"dt":0.1,"observables":["q2_1","q2_3"],"format":"json"})";
        const RunResult r = run_cli("series --config " + cfg.string() + " --dt 0.5");
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("\"columns\"") != std::string::npos);
        REQUIRE(r.out.find("q2_3") != std::string::npos);
        // dt flag overrode the file: 2.0 / 0.5 + 1 = 5 rows
        const auto rows_pos = r.out.find("\"rows\"");
        REQUIRE(rows_pos != std::string::npos);
        std::size_t count = 0;
        for (std::size_t pos = rows_pos; (pos = r.out.find('[', pos + 1)) != std::string::npos;)
            ++count;
        REQUIRE(count == 6); // rows array + 5 row arrays
    }
    SECTION("manifest side-car reproduces the run bit-exactly") {
        const fs::path out1 = dir / "decay1.csv";
        const fs::path out2 = dir / "decay2.csv";
        const RunResult r1 = run_cli("decay-map --x-min 1 --x-max 1.5 --x-steps 4 "
                                     "--y-min 1 --y-max 1.5 --y-steps 4 -o " + out1.string());
        REQUIRE(r1.code == 0);
        REQUIRE(fs::exists(out1));
        REQUIRE(fs::exists(dir / "decay1.csv.manifest.json"));
        REQUIRE(fs::exists(dir / "decay1.csv.overlays.csv"));
        const RunResult r2 = run_cli("decay-map --config " +
                                     (dir / "decay1.csv.manifest.json").string() + " -o " +
                                     out2.string());
        REQUIRE(r2.code == 0);
        REQUIRE(slurp(out1) == slurp(out2));
    }
    SECTION("evolve dumps a covariance row") {
        const RunResult r = run_cli("evolve --time 3 --basis natural");
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("cov_11") != std::string::npos);
        REQUIRE(r.out.find("\n3,natural,") != std::string::npos);
    }
}

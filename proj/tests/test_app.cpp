#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hch/app.hpp"
#include "hch/potential.hpp"
#include "hch/profiles.hpp"

using namespace hch;
using doctest::Contains;
namespace fs = std::filesystem;

namespace {

const char* kTwoLayer = R"({
  "domain": {"n": 128}, "eps": 0.1, "tau": 0.5,
  "profile": {"jumps": [0.35, 0.65], "r": 0.15},
  "time": {"dt": 1e-4, "t_max": 0.02, "output_every": 20}
})";

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

fs::path fresh_dir(const char* name) {
    const fs::path dir = fs::temp_directory_path() / name;
    fs::remove_all(dir);
    return dir;
}

}  // namespace

TEST_CASE("equilibrium initial data keeps every column constant") {
    const RunConfig cfg = parse_config(R"({
      "domain": {"n": 128}, "eps": 0.1, "tau": 0.5,
      "profile": {"jumps": [], "r": 0.15},
      "time": {"dt": 1e-3, "t_max": 0.05, "output_every": 10}
    })");
    const SimulateResult res = run_simulation(cfg);
    CHECK_FALSE(res.failed);
    CHECK_FALSE(res.tracking);
    CHECK_FALSE(res.exit_time.has_value());

    const auto rows = lines_of(res.run_csv);
    REQUIRE(rows.size() >= 4);
    CHECK(rows[0] == "t,mass,p_eps,kinetic,e_eps,diss_cum,residual,n_layers,hausdorff_from_init");
    const std::string tail = rows[1].substr(rows[1].find(','));
    for (std::size_t i = 2; i < rows.size(); ++i)
        CHECK(rows[i].substr(rows[i].find(',')) == tail);
    CHECK(tail.find(",0,nan") != std::string::npos);  // n_layers 0, no tracking
    CHECK(res.reports.front().e_eps == 0.0);          // exact well, exact equilibrium
    CHECK(res.initial_certificate.n_layers == 0);
    CHECK(res.summary.find("tracking: disabled") != std::string::npos);
}

TEST_CASE("two-layer run decays the energy and stays censored") {
    const RunConfig cfg = parse_config(kTwoLayer);
    const SimulateResult res = run_simulation(cfg);
    CHECK_FALSE(res.failed);
    CHECK(res.tracking);
    CHECK_FALSE(res.exit_time.has_value());
    REQUIRE(res.reports.size() >= 5);

    const double gate = 1e-8 * res.reports.front().e_eps;
    for (std::size_t i = 1; i < res.reports.size(); ++i)
        CHECK(res.reports[i].e_eps <= res.reports[i - 1].e_eps + gate);

    // Mass is conserved. The identity residual of a raw (unprepared)
    // interpolant bottoms out at an O(dx^2/eps^2) floor from the initial
    // transient; the dt-scaling claim is tested on prepared states.
    const auto rows = lines_of(res.run_csv);
    CHECK(rows[0] ==
          "t,mass,p_eps,kinetic,e_eps,diss_cum,residual,n_layers,h_1,h_2,hausdorff_from_init");
    for (const EnergyReport& r : res.reports) {
        CHECK(std::abs(r.mass - res.reports.front().mass) <= 1e-12);
        const double residual = std::abs(res.reports.front().e_eps - r.e_eps - r.diss_cum) /
                                res.reports.front().e_eps;
        CHECK(residual <= 0.05);
    }
    CHECK(res.initial_certificate.verdict == CertificateVerdict::Pass);
    CHECK(res.initial_certificate.n_layers == 2);
    CHECK(res.summary.find("censored at t_max") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical records") {
    const RunConfig cfg = parse_config(R"({
      "domain": {"n": 128}, "eps": 0.1, "tau": 0.5, "seed": 11,
      "profile": {"jumps": [0.35, 0.65], "r": 0.15},
      "velocity": {"type": "noise", "amplitude": 0.01},
      "time": {"dt": 1e-4, "t_max": 5e-3, "output_every": 10}
    })");
    const SimulateResult a = run_simulation(cfg);
    const SimulateResult b = run_simulation(cfg);
    CHECK(a.run_csv == b.run_csv);
    CHECK(a.track_csv == b.track_csv);
    CHECK(a.summary == b.summary);
    CHECK(a.reports.front().kinetic > 0.0);  // the noise actually acted
}

TEST_CASE("solver blowup leaves a partial record with a FAILED sentinel") {
    const RunConfig cfg = parse_config(R"({
      "domain": {"n": 128}, "eps": 0.1, "tau": 1.0,
      "profile": {"jumps": [], "r": 0.15},
      "velocity": {"type": "noise", "amplitude": 1e8, "seed": 2},
      "time": {"dt": 1e3, "t_max": 2e4, "output_every": 1}
    })");
    const SimulateResult res = run_simulation(cfg);
    CHECK(res.failed);
    CHECK(res.failure.find("non-finite") != std::string::npos);
    CHECK(res.reports.size() >= 1);  // rows before the failure survive
    const auto rows = lines_of(res.run_csv);
    CHECK(rows.back().rfind("FAILED", 0) == 0);
    CHECK(res.summary.find("FAILED") != std::string::npos);

    const fs::path dir = fresh_dir("hch_app_failed");
    CHECK(cmd_simulate(cfg, dir.string()) == 1);
    CHECK(slurp(dir / "run.csv").find("FAILED") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("a tight exit threshold fires the monitor and stops the run") {
    const RunConfig cfg = parse_config(R"({
      "domain": {"n": 128}, "eps": 0.1, "tau": 0.5, "seed": 1,
      "profile": {"jumps": [0.35, 0.65], "r": 0.15},
      "velocity": {"type": "noise", "amplitude": 0.01},
      "time": {"dt": 1e-4, "t_max": 1.0, "output_every": 1},
      "stop": {"delta1": 1e-9}
    })");
    const SimulateResult res = run_simulation(cfg);
    CHECK_FALSE(res.failed);
    REQUIRE(res.exit_time.has_value());
    CHECK(*res.exit_time <= 10 * cfg.time.dt);
    CHECK(res.steps < 100);  // stopped long before t_max / dt
    CHECK(res.summary.find("exit_time:") != std::string::npos);
    CHECK(res.summary.find("censored") == std::string::npos);
}

TEST_CASE("snapshots are captured at the configured times") {
    RunConfig cfg = parse_config(kTwoLayer);
    cfg.time.snapshots = {0.0, 0.01};
    const SimulateResult res = run_simulation(cfg);
    REQUIRE(res.snapshots.size() == 2);
    CHECK(res.snapshots[0].t == 0.0);
    CHECK(res.snapshots[1].t == doctest::Approx(0.01).epsilon(0.3));
    CHECK(res.snapshots[1].t >= 0.01 - 1e-12);
    CHECK(res.final_state.t == doctest::Approx(0.02));
    CHECK(res.final_state.u.size() == 1);
    CHECK(res.final_state.w.size() == 1);
}

TEST_CASE("cmd_simulate writes the documented artifact set") {
    const RunConfig cfg = parse_config(R"({
      "domain": {"n": 128}, "eps": 0.1, "tau": 0.5,
      "profile": {"jumps": [0.35, 0.65], "r": 0.15},
      "time": {"dt": 1e-4, "t_max": 5e-3, "output_every": 10, "snapshots": [0.002]}
    })");
    const fs::path dir = fresh_dir("hch_app_simulate");
    CHECK(cmd_simulate(cfg, dir.string()) == 0);
    for (const char* name :
         {"config.json", "run.csv", "track.csv", "summary.txt", "plot.gp", "final.snap",
          "snapshot_0.snap"})
        CHECK(fs::exists(dir / name));

    // The stored config is the materialized one: parsing it round-trips.
    const std::string stored = slurp(dir / "config.json");
    CHECK(serialize_config(parse_config(stored)) == stored);

    const Snapshot fin = read_snapshot((dir / "final.snap").string());
    CHECK(fin.n == cfg.n);
    CHECK(fin.eps == cfg.eps);
    CHECK(fin.t == doctest::Approx(5e-3));

    const SimulateResult res = run_simulation(cfg);
    CHECK(slurp(dir / "run.csv") == res.run_csv);
    CHECK(slurp(dir / "track.csv") == res.track_csv);
    fs::remove_all(dir);
}

TEST_CASE("sweeps are deterministic across worker counts and flag censoring") {
    const std::string plan_text = R"({
      "base": {
        "domain": {"n": 128}, "eps": 0.1, "tau": 0.5,
        "profile": {"jumps": [0.35, 0.65], "r": 0.15},
        "time": {"dt": 2e-4, "t_max": 4e-3, "output_every": 5}
      },
      "axis": {"parameter": "eps", "values": [0.1, 0.09, 0.08]}
    })";
    const SweepPlan plan = parse_sweep(plan_text);
    const fs::path d1 = fresh_dir("hch_app_sweep1");
    const fs::path d4 = fresh_dir("hch_app_sweep4");
    const SweepResult r1 = run_sweep(plan, d1.string(), 1);
    const SweepResult r4 = run_sweep(plan, d4.string(), 4);
    CHECK_FALSE(r1.any_failed);
    CHECK(r1.csv == r4.csv);
    CHECK(r1.summary == r4.summary);
    CHECK(slurp(d1 / "point_2" / "run.csv") == slurp(d4 / "point_2" / "run.csv"));

    const auto rows = lines_of(r1.csv);
    CHECK(rows[0] == "eps,excess,exit_time_or_censored,t_max");
    CHECK(rows[1].find("censored") != std::string::npos);
    CHECK(r1.csv.find("# all censored; lower bound on t_eps = t_max") != std::string::npos);
    CHECK(r1.csv.find("# excess_fit slope=") != std::string::npos);
    for (const SweepPointOutcome& p : r1.points) CHECK(p.excess > 0.0);
    fs::remove_all(d1);
    fs::remove_all(d4);
}

TEST_CASE("a failing sweep point is flagged while the sweep continues") {
    const std::string plan_text = R"({
      "base": {
        "domain": {"n": 128}, "eps": 0.1, "tau": 0.5,
        "profile": {"jumps": [0.35, 0.65], "r": 0.15},
        "time": {"dt": 2e-4, "t_max": 2e-3, "output_every": 5}
      },
      "axis": {"parameter": "eps", "values": [0.1, 0.09]},
      "overrides": [{}, {"velocity": {"type": "file", "path": "/nonexistent/w0.txt"}}]
    })";
    const fs::path dir = fresh_dir("hch_app_sweep_fail");
    const SweepPlan plan = parse_sweep(plan_text);
    const SweepResult res = run_sweep(plan, dir.string(), 2);
    CHECK(res.any_failed);
    REQUIRE(res.points.size() == 2);
    CHECK_FALSE(res.points[0].failed);
    CHECK(res.points[1].failed);
    CHECK(res.points[1].message.find("cannot open") != std::string::npos);
    CHECK(lines_of(res.csv)[2].find("FAILED,FAILED") != std::string::npos);
    CHECK(cmd_sweep(plan, dir.string(), 2) == 1);
    fs::remove_all(dir);
}

TEST_CASE("standing wave table matches tanh(x / sqrt 2) for the quartic well") {
    const ScalarPotential p = make_quartic();
    const GridFunction w = standing_wave_table(p, 8.0, 0.005);
    REQUIRE(w.n() == 3201);
    const std::size_t half = w.n() / 2;
    CHECK(w.values[half] == 0.0);
    CHECK(w.x(half) == doctest::Approx(0.0));
    double err = 0.0;
    for (std::size_t i = 0; i < w.n(); ++i)
        err = std::max(err, std::abs(w.values[i] - std::tanh(w.x(i) / std::sqrt(2.0))));
    CHECK(err <= 1e-8);
    // The quartic is even, so the table is exactly antisymmetric.
    for (std::size_t i = 1; i <= half; ++i) CHECK(w.values[half + i] == -w.values[half - i]);

    CHECK_THROWS_WITH_AS(standing_wave_table(p, 0.0, 0.01), Contains("requires 0 < dx <= xmax"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(standing_wave_table(p, 1.0, 2.0), Contains("requires 0 < dx <= xmax"),
                         std::invalid_argument);
}

TEST_CASE("cmd_profile dumps the initial data it would integrate") {
    const RunConfig cfg = parse_config(kTwoLayer);
    const fs::path dir = fresh_dir("hch_app_profile");
    CHECK(cmd_profile(cfg, dir.string()) == 0);
    const GridFunction stored = read_grid_function((dir / "profile.txt").string());
    const GridFunction expect = build_layer_profile(
        build_step(cfg.a, cfg.b, cfg.profile.jumps, cfg.profile.r, cfg.profile.left_value),
        make_quartic(), cfg.eps, cfg.n);
    REQUIRE(stored.n() == expect.n());
    for (std::size_t i = 0; i < expect.n(); ++i) CHECK(stored.values[i] == expect.values[i]);
    fs::remove_all(dir);
}

TEST_CASE("cmd_certify re-certifies a stored snapshot") {
    const RunConfig cfg = parse_config(kTwoLayer);
    const fs::path dir = fresh_dir("hch_app_certify");
    REQUIRE(cmd_simulate(cfg, dir.string()) == 0);
    std::string report;
    CHECK(cmd_certify(cfg, (dir / "final.snap").string(), report) == 0);
    CHECK(report.find("verdict=pass") != std::string::npos);
    CHECK(report.find("final.snap") != std::string::npos);

    const RunConfig vec = parse_config(R"({
      "potential": {"type": "decoupled-quartic", "m": 2},
      "profile": {"jumps": [0.35, 0.65], "r": 0.15, "labels": [0, 3, 1]},
      "eps": 0.1, "domain": {"n": 128}
    })");
    std::string unused;
    CHECK_THROWS_WITH_AS(cmd_certify(vec, (dir / "final.snap").string(), unused),
                         Contains("components"), std::invalid_argument);
    fs::remove_all(dir);
}

TEST_CASE("t_max zero records exactly the initial instant") {
    RunConfig cfg = parse_config(kTwoLayer);
    cfg.time.t_max = 0.0;
    const SimulateResult res = run_simulation(cfg);
    CHECK_FALSE(res.failed);
    CHECK(res.steps == 0);
    REQUIRE(res.reports.size() == 1);
    CHECK(res.reports[0].t == 0.0);
    CHECK(res.final_state.t == 0.0);
}

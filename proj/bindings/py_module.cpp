// Python face of the laboratory: configuration handling, the closed-form
// reference quantities, and the simulate/sweep/certify drivers. Results come
// back as plain dicts and lists so the module has no numpy dependency.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <string>
#include <vector>

#include "hch/app.hpp"
#include "hch/potential.hpp"
#include "hch/profiles.hpp"
#include "hch/snapshot.hpp"
#include "hch/vector_systems.hpp"

namespace py = pybind11;

namespace {

hch::VectorPotential vector_from(const std::string& config_text) {
    if (config_text.empty()) return hch::embed_scalar(hch::make_quartic());
    return hch::vector_potential_of(hch::parse_config(config_text).potential);
}

std::vector<double> grid_nodes(const hch::GridFunction& f) {
    std::vector<double> xs(f.n());
    for (std::size_t i = 0; i < f.n(); ++i) xs[i] = f.x(i);
    return xs;
}

}  // namespace

PYBIND11_MODULE(_hch, m) {
    m.doc() = "metastable layer dynamics of the relaxed Cahn-Hilliard equation";

    m.def(
        "c0", [](double tol) { return hch::c0(hch::make_quartic(), tol); },
        py::arg("tol") = 1e-12,
        "Energy of one quartic-well transition, 2*sqrt(2)/3, by adaptive quadrature.");

    m.def(
        "normalize_config",
        [](const std::string& text) { return hch::serialize_config(hch::parse_config(text)); },
        py::arg("text"),
        "Strictly parse a run configuration and return it with every default "
        "materialized; raises ValueError on unknown keys or inconsistent fields.");

    m.def(
        "omega",
        [](double xmax, double dx, const std::string& config_text) {
            const hch::ScalarPotential p =
                config_text.empty()
                    ? hch::make_quartic()
                    : hch::scalar_potential_of(hch::parse_config(config_text).potential);
            const hch::GridFunction w = hch::standing_wave_table(p, xmax, dx);
            return py::make_tuple(grid_nodes(w), w.values);
        },
        py::arg("xmax") = 10.0, py::arg("dx") = 0.01, py::arg("config") = "",
        "Standing-wave profile of the scalar potential as (x, w) lists.");

    m.def(
        "phi",
        [](std::size_t i, std::size_t j, const std::string& config_text, std::size_t points,
           double tol) {
            const hch::VectorPotential p = vector_from(config_text);
            hch::PhiCache cache;
            const hch::PathCurve& c = cache.get(p, i, j, points, 4000, tol);
            return py::make_tuple(c.j_value, c.straight_value, c.iterations);
        },
        py::arg("i"), py::arg("j"), py::arg("config") = "", py::arg("points") = 257,
        py::arg("tol") = 1e-10,
        "Transition cost between zeros i and j as (value, straight_value, iterations).");

    m.def(
        "simulate",
        [](const std::string& text) {
            const hch::SimulateResult res = hch::run_simulation(hch::parse_config(text));
            py::dict d;
            d["failed"] = res.failed;
            d["failure"] = res.failure;
            d["dt"] = res.dt;
            d["steps"] = res.steps;
            d["tracking"] = res.tracking;
            d["exit_time"] =
                res.exit_time ? py::object(py::float_(*res.exit_time)) : py::object(py::none());
            d["run_csv"] = res.run_csv;
            d["track_csv"] = res.track_csv;
            d["summary"] = res.summary;
            d["initial_excess"] = res.initial_certificate.excess;
            d["final_excess"] = res.final_certificate.excess;
            return d;
        },
        py::arg("config"),
        "Integrate one configured run in memory; returns the record as a dict.");

    m.def(
        "simulate_to",
        [](const std::string& text, const std::string& out_dir) {
            return hch::cmd_simulate(hch::parse_config(text), out_dir);
        },
        py::arg("config"), py::arg("out_dir"),
        "Integrate and write the artifact set (config.json, run.csv, track.csv, "
        "summary.txt, plot.gp, snapshots) under out_dir; returns the exit code.");

    m.def(
        "sweep",
        [](const std::string& text, const std::string& out_dir, std::size_t workers) {
            const hch::SweepPlan plan = hch::parse_sweep(text);
            std::filesystem::create_directories(out_dir);
            const hch::SweepResult res = hch::run_sweep(plan, out_dir, workers);
            py::dict d;
            d["any_failed"] = res.any_failed;
            d["csv"] = res.csv;
            d["summary"] = res.summary;
            py::list values;
            for (const hch::SweepPointOutcome& p : res.points) {
                py::dict e;
                e["value"] = p.value;
                e["failed"] = p.failed;
                e["excess"] = p.excess;
                e["exit_time"] =
                    p.exit_time ? py::object(py::float_(*p.exit_time)) : py::object(py::none());
                values.append(e);
            }
            d["points"] = values;
            return d;
        },
        py::arg("plan"), py::arg("out_dir"), py::arg("workers") = 0,
        "Run a parameter sweep; point artifacts land in out_dir/point_<i>/.");

    m.def(
        "profile",
        [](const std::string& text) {
            const hch::RunConfig cfg = hch::parse_config(text);
            if (cfg.potential.components() == 1) {
                const hch::ScalarPotential p = hch::scalar_potential_of(cfg.potential);
                const hch::StepProfile v = hch::build_step(cfg.a, cfg.b, cfg.profile.jumps,
                                                           cfg.profile.r, cfg.profile.left_value);
                const hch::GridFunction u = hch::build_layer_profile(v, p, cfg.eps, cfg.n);
                return py::make_tuple(grid_nodes(u),
                                      std::vector<std::vector<double>>{u.values});
            }
            const hch::VectorPotential p = hch::vector_potential_of(cfg.potential);
            const hch::VectorStepProfile v = hch::build_vector_step(
                cfg.a, cfg.b, cfg.profile.jumps, cfg.profile.r, cfg.profile.labels, p);
            hch::PhiCache cache;
            const auto u = hch::build_vector_layer_profile(v, p, cfg.eps, cfg.n, cache);
            std::vector<std::vector<double>> comps;
            for (const hch::GridFunction& c : u) comps.push_back(c.values);
            return py::make_tuple(grid_nodes(u[0]), comps);
        },
        py::arg("config"),
        "Initial layer profile the config would integrate, as (x, [u_1, ..., u_m]).");

    m.def(
        "certify",
        [](const std::string& text, const std::string& snapshot_path) {
            std::string report;
            hch::cmd_certify(hch::parse_config(text), snapshot_path, report);
            return report;
        },
        py::arg("config"), py::arg("snapshot"),
        "Lower-bound certificate of a saved state against the config's profile.");
}

// Command-line laboratory for metastable layer dynamics of the relaxed
// (hyperbolic) Cahn-Hilliard equation. Subcommands: simulate, sweep,
// profile, c0, omega, phi, certify. HCH_OUT overrides --out.
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hch/app.hpp"
#include "hch/potential.hpp"
#include "hch/snapshot.hpp"
#include "hch/vector_systems.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// --seed rewrites the stored seed before the strict parse so a velocity
// seed left at its default follows the override.
std::string patch_seed(const std::string& text, long long seed, bool sweep_plan) {
    auto j = nlohmann::ordered_json::parse(text);
    if (sweep_plan)
        j["base"]["seed"] = seed;
    else
        j["seed"] = seed;
    return j.dump(2) + "\n";
}

std::string resolve_out(const std::string& flag_value) {
    const char* env = std::getenv("HCH_OUT");
    return env && *env ? std::string(env) : flag_value;
}

hch::ScalarPotential scalar_from(const std::string& config_path) {
    if (config_path.empty()) return hch::make_quartic();
    return hch::scalar_potential_of(hch::parse_config(read_file(config_path)).potential);
}

hch::VectorPotential vector_from(const std::string& config_path) {
    if (config_path.empty()) return hch::embed_scalar(hch::make_quartic());
    return hch::vector_potential_of(hch::parse_config(read_file(config_path)).potential);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"metastable layer dynamics of the relaxed Cahn-Hilliard equation"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::string snapshot_path;
    long long seed = 0;
    std::size_t workers = 0;
    double xmax = 10.0;
    double dx = 0.01;
    std::size_t from = 0;
    std::size_t to = 1;
    std::size_t n_points = 257;
    double tol = 1e-10;
    int rc = 0;

    auto* simulate = app.add_subcommand("simulate", "integrate one configured run");
    simulate->add_option("--config", config_path, "run configuration (JSON)")->required();
    simulate->add_option("--out", out_dir, "output directory");
    auto* sim_seed = simulate->add_option("--seed", seed, "override the stored seed");
    simulate->callback([&] {
        std::string text = read_file(config_path);
        if (sim_seed->count()) text = patch_seed(text, seed, false);
        rc = hch::cmd_simulate(hch::parse_config(text), resolve_out(out_dir));
    });

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep with fits");
    sweep->add_option("--config", config_path, "sweep plan (JSON)")->required();
    sweep->add_option("--out", out_dir, "output directory");
    sweep->add_option("--workers", workers, "worker count (0 takes the plan's)");
    auto* sweep_seed = sweep->add_option("--seed", seed, "override the base seed");
    sweep->callback([&] {
        std::string text = read_file(config_path);
        if (sweep_seed->count()) text = patch_seed(text, seed, true);
        rc = hch::cmd_sweep(hch::parse_sweep(text), resolve_out(out_dir), workers);
    });

    auto* profile = app.add_subcommand("profile", "dump the initial layer profile");
    profile->add_option("--config", config_path, "run configuration (JSON)")->required();
    profile->add_option("--out", out_dir, "output directory");
    profile->callback([&] {
        rc = hch::cmd_profile(hch::parse_config(read_file(config_path)), resolve_out(out_dir));
    });

    auto* c0cmd = app.add_subcommand("c0", "print the single-transition energy");
    c0cmd->add_option("--config", config_path, "take the potential from this config");
    c0cmd->callback([&] {
        const double value = hch::c0(scalar_from(config_path));
        std::cout << "c0 = " << hch::format17(value) << " (quadrature tol 1e-12)\n";
    });

    auto* omega = app.add_subcommand("omega", "tabulate the standing-wave profile");
    omega->add_option("--config", config_path, "take the potential from this config");
    omega->add_option("--out", out_dir, "output directory");
    omega->add_option("--xmax", xmax, "half-width of the table");
    omega->add_option("--dx", dx, "table spacing");
    omega->callback([&] {
        const hch::GridFunction w = hch::standing_wave_table(scalar_from(config_path), xmax, dx);
        const std::string dir = resolve_out(out_dir);
        std::filesystem::create_directories(dir);
        const std::string path = dir + "/omega.txt";
        hch::write_grid_function(path, w);
        std::cout << "omega(0) = " << hch::format17(w.values[w.n() / 2]) << "\n";
        std::cout << "table: " << path << " (" << w.n() << " rows)\n";
    });

    auto* phi = app.add_subcommand("phi", "print the transition cost between two zeros");
    phi->add_option("--config", config_path, "take the potential from this config");
    phi->add_option("--from", from, "index of the departure zero");
    phi->add_option("--to", to, "index of the arrival zero");
    phi->add_option("--points", n_points, "discretization points of the path");
    phi->add_option("--tol", tol, "descent tolerance");
    phi->callback([&] {
        const hch::VectorPotential p = vector_from(config_path);
        hch::PhiCache cache;
        const hch::PathCurve& c = cache.get(p, from, to, n_points, 4000, tol);
        std::cout << "phi(" << from << " -> " << to << ") = " << hch::format17(c.j_value)
                  << " (straight " << hch::format17(c.straight_value) << ", iterations "
                  << c.iterations << ", tol " << hch::format17(tol) << ")\n";
    });

    auto* certify = app.add_subcommand("certify", "lower-bound certificate of a saved state");
    certify->add_option("--config", config_path, "run configuration (JSON)")->required();
    certify->add_option("--snapshot", snapshot_path, "saved state to certify")->required();
    certify->callback([&] {
        std::string report;
        rc = hch::cmd_certify(hch::parse_config(read_file(config_path)), snapshot_path, report);
        std::cout << report;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}

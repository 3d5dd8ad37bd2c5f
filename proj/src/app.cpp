#include "hch/app.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <utility>

#include "hch/profiles.hpp"
#include "hch/solver.hpp"
#include "hch/vector_systems.hpp"

namespace fs = std::filesystem;

namespace hch {

namespace {

std::string cell(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    return format17(v);
}

// Per-component scalar potentials (used for dt selection and the K band).
std::vector<ScalarPotential> component_scalars(const PotentialConfig& pc) {
    if (pc.type == "decoupled-quartic")
        return std::vector<ScalarPotential>(pc.m, make_quartic());
    if (pc.type == "polynomial-sum") {
        std::vector<ScalarPotential> out;
        for (std::size_t i = 0; i < pc.sum_coefficients.size(); ++i)
            out.push_back(make_polynomial(pc.sum_coefficients[i], pc.sum_wells[i]));
        return out;
    }
    return {scalar_potential_of(pc)};
}

double resolve_dt(const RunConfig& cfg, const GridFunction& grid) {
    if (!cfg.time.auto_dt) return cfg.time.dt;
    const SolverConfig sc = solver_config_of(cfg);
    double dt = std::numeric_limits<double>::infinity();
    for (const ScalarPotential& p : component_scalars(cfg.potential))
        dt = std::min(dt, select_dt(sc, grid, p));
    return dt;
}

GridFunction velocity_field(const RunConfig& cfg, std::size_t component) {
    const std::size_t n = cfg.n;
    if (cfg.velocity.type == "zero")
        return GridFunction(cfg.a, cfg.b, std::vector<double>(n, 0.0));
    if (cfg.velocity.type == "noise") {
        GridFunction w = make_noise_velocity(cfg.a, cfg.b, n, cfg.velocity.amplitude,
                                             cfg.velocity.seed + component);
        // Dirichlet pins u_t at the walls; the noise family is masked there.
        if (cfg.boundary == "dirichlet") w.values.front() = w.values.back() = 0.0;
        return w;
    }
    if (cfg.potential.components() > 1)
        throw std::invalid_argument("velocity files support a single component; got potential \"" +
                                    cfg.potential.type + "\"");
    GridFunction w = read_grid_function(cfg.velocity.path);
    const double tol = 1e-9 * (cfg.b - cfg.a);
    if (w.n() != n || std::abs(w.a - cfg.a) > tol || std::abs(w.b - cfg.b) > tol)
        throw std::invalid_argument("velocity file " + cfg.velocity.path +
                                    " does not match the configured grid");
    if (cfg.boundary == "dirichlet" &&
        (w.values.front() != 0.0 || w.values.back() != 0.0))
        throw std::invalid_argument("velocity file " + cfg.velocity.path +
                                    " must vanish at the walls in dirichlet mode");
    return w;
}

Snapshot snapshot_of(const RunConfig& cfg, double t, const std::vector<GridFunction>& u,
                     const std::vector<GridFunction>& w) {
    Snapshot s;
    s.n = cfg.n;
    s.m = cfg.potential.components();
    s.a = cfg.a;
    s.b = cfg.b;
    s.eps = cfg.eps;
    s.tau = cfg.tau;
    s.t = t;
    s.formulation = cfg.formulation;
    s.u = u;
    s.w = w;
    return s;
}

// Shared bookkeeping across the scalar and vector drives: per-step
// dissipation accumulation, strided rows, interface tracking, snapshot
// capture, exit detection.
struct Recording {
    const RunConfig& cfg;
    SimulateResult& res;
    std::size_t nsteps = 0;
    double diss = 0.0;
    double prev_rate = 0.0;
    std::size_t next_snap = 0;
    std::vector<double> snap_times;

    Recording(const RunConfig& cfg_, SimulateResult& res_) : cfg(cfg_), res(res_) {
        snap_times = cfg.time.snapshots;
        std::sort(snap_times.begin(), snap_times.end());
    }

    void step_rate(std::size_t k, double rate_sq, double dt) {
        if (k > 0) diss += 0.5 * (prev_rate + rate_sq) * dt / cfg.eps;
        prev_rate = rate_sq;
    }

    bool due(std::size_t k) const {
        return k == 0 || k % cfg.time.output_every == 0 || k == nsteps;
    }

    void record(double t, std::size_t k, EnergyReport rep, const GridFunction& u_first,
                const std::vector<GridFunction>& u, const std::vector<GridFunction>& w) {
        rep.t = t;
        rep.diss_cum = diss;
        res.reports.push_back(rep);
        res.steps = k;
        if (res.tracking) {
            track_append(res.track, t, u_first);
            if (!res.exit_time && res.track.hausdorff_from_init.back() > cfg.stop.delta1)
                res.exit_time = t;
        }
        while (next_snap < snap_times.size() && t >= snap_times[next_snap] - 1e-12) {
            res.snapshots.push_back(snapshot_of(cfg, t, u, w));
            ++next_snap;
        }
        res.final_state = snapshot_of(cfg, t, u, w);
    }
};

std::size_t count_steps(const SolverConfig& sc, double t0) {
    if (sc.t_max <= t0) return 0;
    return static_cast<std::size_t>(std::ceil((sc.t_max - t0) / sc.dt - 1e-9));
}

void simulate_scalar(const RunConfig& cfg, SimulateResult& res) {
    const ScalarPotential p = scalar_potential_of(cfg.potential);
    const StepProfile v =
        build_step(cfg.a, cfg.b, cfg.profile.jumps, cfg.profile.r, cfg.profile.left_value);
    const GridFunction u0 = build_layer_profile(v, p, cfg.eps, cfg.n);
    const GridFunction w0 = velocity_field(cfg, 0);

    SolverConfig sc = solver_config_of(cfg);
    sc.dt = resolve_dt(cfg, u0);
    res.dt = sc.dt;
    const bool dirichlet = sc.boundary.kind == BoundaryKind::DirichletWells;

    res.initial_certificate =
        lower_bound_certificate(u0, v, p, cfg.eps, cfg.stop.certificate_a, sc.boundary);
    res.track.kband = make_kband(cfg.stop.kband, p);
    res.track.matching_radius = cfg.profile.r / 2.0;
    res.tracking = !interface_of_function(u0, res.track.kband).empty();

    Recording rec(cfg, res);
    State s = make_state(u0, w0, sc.formulation);
    rec.nsteps = count_steps(sc, s.t);

    const auto prim_of = [dirichlet](const GridFunction& ut) {
        return dirichlet ? primitive_bar(ut) : primitive_tilde(ut);
    };
    const Observer acc = [&](const State& st, std::size_t k) {
        const GridFunction prim = prim_of(time_derivative(st, sc, p));
        rec.step_rate(k, l2_norm_sq(prim), sc.dt);
        if (rec.due(k))
            rec.record(st.t, k, e_eps(st.u, prim, p, cfg.eps, cfg.tau), st.u, {st.u},
                       sc.formulation == Formulation::ClassicCH
                           ? std::vector<GridFunction>{}
                           : std::vector<GridFunction>{st.w});
    };
    const StopPredicate stop = [&](const State&, std::size_t) {
        return res.exit_time.has_value();
    };

    try {
        run(std::move(s), sc, p, {acc}, stop, 1);
    } catch (const std::exception& e) {
        res.failed = true;
        res.failure = e.what();
    }

    // A blown-up final state must not lose the partial record.
    if (!res.final_state.u.empty()) try {
            res.final_certificate = lower_bound_certificate(res.final_state.u[0], v, p, cfg.eps,
                                                            cfg.stop.certificate_a, sc.boundary);
        } catch (const std::exception&) {
        }
}

void simulate_vector(const RunConfig& cfg, SimulateResult& res) {
    const VectorPotential p = vector_potential_of(cfg.potential);
    const VectorStepProfile v = build_vector_step(cfg.a, cfg.b, cfg.profile.jumps, cfg.profile.r,
                                                  cfg.profile.labels, p);
    PhiCache cache;
    const std::vector<GridFunction> u0 = build_vector_layer_profile(v, p, cfg.eps, cfg.n, cache);
    std::vector<GridFunction> w0;
    for (std::size_t c = 0; c < p.m; ++c) w0.push_back(velocity_field(cfg, c));

    SolverConfig sc = solver_config_of(cfg);
    sc.dt = resolve_dt(cfg, u0[0]);
    res.dt = sc.dt;

    res.initial_certificate =
        vector_lower_bound_certificate(u0, v, p, cfg.eps, cfg.stop.certificate_a, cache);
    res.track.kband = make_kband(cfg.stop.kband, component_scalars(cfg.potential)[0]);
    res.track.matching_radius = cfg.profile.r / 2.0;
    res.tracking = !interface_of_function(u0[0], res.track.kband).empty();

    Recording rec(cfg, res);
    VectorState s = make_vector_state(u0, w0);
    rec.nsteps = count_steps(sc, s.t);

    const VectorObserver acc = [&](const VectorState& st, std::size_t k) {
        double rate = 0.0;
        for (const GridFunction& wc : st.w) rate += l2_norm_sq(primitive_tilde(wc));
        rec.step_rate(k, rate, sc.dt);
        if (rec.due(k)) {
            EnergyReport rep = vector_energy(st, p, cfg.eps, cfg.tau);
            rec.record(st.t, k, rep, st.u[0], st.u, st.w);
        }
    };
    const VectorStopPredicate stop = [&](const VectorState&, std::size_t) {
        return res.exit_time.has_value();
    };

    try {
        vector_run(std::move(s), sc, p, {acc}, stop, 1);
    } catch (const std::exception& e) {
        res.failed = true;
        res.failure = e.what();
    }

    if (!res.final_state.u.empty()) try {
            res.final_certificate = vector_lower_bound_certificate(
                res.final_state.u, v, p, cfg.eps, cfg.stop.certificate_a, cache);
        } catch (const std::exception&) {
        }
}

std::size_t layer_column_count(const SimulateResult& res) {
    std::size_t ncols = 0;
    for (const auto& row : res.track.layer_positions) ncols = std::max(ncols, row.size());
    return ncols;
}

std::size_t live_layers(const std::vector<double>& row) {
    std::size_t k = 0;
    for (double h : row)
        if (!std::isnan(h)) ++k;
    return k;
}

std::string build_run_csv(const SimulateResult& res) {
    const std::size_t ncols = res.tracking ? layer_column_count(res) : 0;
    std::ostringstream out;
    out << "t,mass,p_eps,kinetic,e_eps,diss_cum,residual,n_layers";
    for (std::size_t j = 0; j < ncols; ++j) out << ",h_" << (j + 1);
    out << ",hausdorff_from_init\n";
    const double e0 = res.reports.empty() ? 0.0 : res.reports.front().e_eps;
    for (std::size_t i = 0; i < res.reports.size(); ++i) {
        const EnergyReport& r = res.reports[i];
        const double residual =
            std::abs(e0 - r.e_eps - r.diss_cum) / std::max(e0, 1e-300);
        out << cell(r.t) << "," << cell(r.mass) << "," << cell(r.p_eps) << ","
            << cell(r.kinetic) << "," << cell(r.e_eps) << "," << cell(r.diss_cum) << ","
            << cell(residual) << ",";
        if (res.tracking) {
            const auto& row = res.track.layer_positions[i];
            out << live_layers(row);
            for (std::size_t j = 0; j < ncols; ++j)
                out << "," << cell(j < row.size() ? row[j]
                                                  : std::numeric_limits<double>::quiet_NaN());
            out << "," << cell(res.track.hausdorff_from_init[i]);
        } else {
            out << 0 << "," << "nan";
        }
        out << "\n";
    }
    if (res.failed) out << "FAILED " << res.failure << "\n";
    return out.str();
}

std::string build_track_csv(const SimulateResult& res) {
    const std::size_t ncols = res.tracking ? layer_column_count(res) : 0;
    std::ostringstream out;
    out << "t,n_layers";
    for (std::size_t j = 0; j < ncols; ++j) out << ",h_" << (j + 1);
    out << ",hausdorff_from_init\n";
    if (!res.tracking) return out.str();
    for (std::size_t i = 0; i < res.track.times.size(); ++i) {
        const auto& row = res.track.layer_positions[i];
        out << cell(res.track.times[i]) << "," << live_layers(row);
        for (std::size_t j = 0; j < ncols; ++j)
            out << ","
                << cell(j < row.size() ? row[j] : std::numeric_limits<double>::quiet_NaN());
        out << "," << cell(res.track.hausdorff_from_init[i]) << "\n";
    }
    return out.str();
}

void describe_certificate(std::ostringstream& out, const char* label,
                          const LowerBoundCertificate& c) {
    out << "certificate[" << label << "]: verdict=" << to_string(c.verdict)
        << " n_layers=" << c.n_layers << " c0=" << cell(c.c0) << " excess=" << cell(c.excess)
        << " floor=" << cell(c.floor) << " l1_distance=" << cell(c.l1_distance)
        << " delta=" << cell(c.delta) << " A=" << cell(c.A) << "\n";
}

std::string build_summary(const RunConfig& cfg, const SimulateResult& res) {
    std::ostringstream out;
    out << "status: " << (res.failed ? "FAILED " + res.failure : "ok") << "\n";
    out << "formulation: " << cfg.formulation << ", boundary: " << cfg.boundary
        << ", m: " << cfg.potential.components() << "\n";
    out << "eps: " << cell(cfg.eps) << ", tau: " << cell(cfg.tau) << ", n: " << cfg.n
        << ", dt: " << cell(res.dt) << ", t_max: " << cell(cfg.time.t_max) << "\n";
    out << "steps: " << res.steps << ", recorded rows: " << res.reports.size() << "\n";

    if (!res.tracking)
        out << "tracking: disabled (initial interface set is empty)\n";
    else if (res.exit_time)
        out << "exit_time: " << cell(*res.exit_time) << " (hausdorff exceeded delta1="
            << cell(cfg.stop.delta1) << ")\n";
    else
        out << "exit_time: censored at t_max=" << cell(cfg.time.t_max)
            << " (lower bound on the exit time)\n";

    describe_certificate(out, "initial", res.initial_certificate);
    if (!res.reports.empty()) describe_certificate(out, "final", res.final_certificate);

    if (!res.reports.empty()) {
        const double m0 = res.reports.front().mass;
        double drift = 0.0;
        for (const EnergyReport& r : res.reports) drift = std::max(drift, std::abs(r.mass - m0));
        out << "mass: m(0)=" << cell(m0) << ", max |m(t)-m(0)|=" << cell(drift) << "\n";
        if (cfg.boundary == "neumann" && cfg.tau > 0.0) {
            // m'(0) from the first recorded rate is not available; the closed
            // form is reported against the measured initial slope instead.
            const double m0prime = res.reports.size() > 1 && res.reports[1].t > 0.0
                                       ? (res.reports[1].mass - m0) /
                                             (cfg.tau * (1.0 - std::exp(-res.reports[1].t /
                                                                        cfg.tau)))
                                       : 0.0;
            double dev = 0.0;
            for (const EnergyReport& r : res.reports)
                dev = std::max(dev, std::abs(r.mass -
                                             mass_closed_form(r.t, m0, m0prime, cfg.tau)));
            out << "mass closed form: m'(0)=" << cell(m0prime)
                << ", max deviation=" << cell(dev) << "\n";
        }
        const EnergyReport& last = res.reports.back();
        const double e0 = res.reports.front().e_eps;
        out << "energy: E(0)=" << cell(e0) << ", E(final)=" << cell(last.e_eps)
            << ", diss_cum=" << cell(last.diss_cum) << ", identity residual="
            << cell(std::abs(e0 - last.e_eps - last.diss_cum) / std::max(e0, 1e-300)) << "\n";
    }

    out << "events: " << res.track.events.size() << "\n";
    for (const std::string& e : res.track.events) out << "  " << e << "\n";
    return out.str();
}

std::string build_plot_script(const SimulateResult& res) {
    const std::size_t ncols = res.tracking ? layer_column_count(res) : 0;
    std::ostringstream out;
    out << "set datafile separator \",\"\n"
        << "set key outside\n"
        << "set xlabel \"t\"\n"
        << "set terminal dumb size 120,30\n"
        << "set title \"energy record\"\n"
        << "plot \"run.csv\" using 1:5 with lines title \"e_eps\", \\\n"
        << "     \"run.csv\" using 1:6 with lines title \"diss_cum\"\n";
    if (ncols > 0) {
        out << "set title \"layer positions\"\n" << "plot ";
        for (std::size_t j = 0; j < ncols; ++j)
            out << (j ? ", \\\n     " : "") << "\"run.csv\" using 1:" << (9 + j)
                << " with lines title \"h_" << (j + 1) << "\"";
        out << "\n";
    }
    return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed on " + path.string());
}

void write_simulation_outputs(const RunConfig& cfg, const SimulateResult& res,
                              const fs::path& dir) {
    fs::create_directories(dir);
    write_text(dir / "config.json", serialize_config(cfg));
    write_text(dir / "run.csv", res.run_csv);
    write_text(dir / "track.csv", res.track_csv);
    write_text(dir / "summary.txt", res.summary);
    write_text(dir / "plot.gp", build_plot_script(res));
    for (std::size_t i = 0; i < res.snapshots.size(); ++i)
        write_snapshot((dir / ("snapshot_" + std::to_string(i) + ".snap")).string(),
                       res.snapshots[i]);
    if (!res.final_state.u.empty())
        write_snapshot((dir / "final.snap").string(), res.final_state);
}

// Least squares of log(t) against 1/eps over uncensored points.
bool exit_fit(const std::vector<SweepPointOutcome>& pts, double& slope, double& intercept,
              std::size_t& used) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    used = 0;
    for (const auto& p : pts) {
        if (p.failed || !p.exit_time || !(p.value > 0.0) || !(*p.exit_time > 0.0)) continue;
        const double x = 1.0 / p.value;
        const double y = std::log(*p.exit_time);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++used;
    }
    if (used < 2) return false;
    const double denom = static_cast<double>(used) * sxx - sx * sx;
    if (denom == 0.0) return false;
    slope = (static_cast<double>(used) * sxy - sx * sy) / denom;
    intercept = (sy - slope * sx) / static_cast<double>(used);
    return true;
}

std::string build_sweep_csv(const SweepPlan& plan, const std::vector<SweepPointOutcome>& pts) {
    std::ostringstream out;
    out << plan.parameter << ",excess,exit_time_or_censored,t_max\n";
    for (const auto& p : pts) {
        out << cell(p.value) << ",";
        if (p.failed)
            out << "FAILED,FAILED";
        else {
            out << cell(p.excess) << ",";
            out << (p.exit_time ? cell(*p.exit_time) : std::string("censored"));
        }
        out << "," << cell(p.t_max) << "\n";
    }

    std::size_t censored = 0, ok = 0;
    for (const auto& p : pts)
        if (!p.failed) {
            ++ok;
            if (!p.exit_time) ++censored;
        }
    if (ok > 0 && censored == ok)
        out << "# all censored; lower bound on t_eps = t_max\n";
    else if (censored > 0)
        out << "# censored " << censored << " of " << ok << " points\n";

    if (plan.parameter == "eps") {
        std::vector<std::pair<double, double>> pairs;
        bool positive = true;
        for (const auto& p : pts) {
            if (p.failed) continue;
            if (!(p.excess > 0.0)) positive = false;
            pairs.emplace_back(p.value, p.excess);
        }
        if (positive && pairs.size() >= 3) {
            const DecayFit fit = excess_decay_fit(pairs);
            out << "# excess_fit slope=" << cell(fit.slope) << " intercept="
                << cell(fit.intercept) << " rms_residual=" << cell(fit.residual) << " points="
                << pairs.size() << "\n";
        } else {
            out << "# excess_fit skipped ("
                << (positive ? "need at least 3 points" : "non-positive excess present")
                << ")\n";
        }
        double slope = 0.0, intercept = 0.0;
        std::size_t used = 0;
        if (exit_fit(pts, slope, intercept, used))
            out << "# exit_fit slope=" << cell(slope) << " intercept=" << cell(intercept)
                << " points=" << used << "\n";
    }
    return out.str();
}

}  // namespace

SimulateResult run_simulation(const RunConfig& cfg) {
    SimulateResult res;
    if (cfg.potential.components() == 1)
        simulate_scalar(cfg, res);
    else
        simulate_vector(cfg, res);
    if (res.tracking) {
        const auto fired = exit_time_monitor(res.track, cfg.stop.delta1);
        if (fired) res.exit_time = fired;
    }
    res.run_csv = build_run_csv(res);
    res.track_csv = build_track_csv(res);
    res.summary = build_summary(cfg, res);
    return res;
}

int cmd_simulate(const RunConfig& cfg, const std::string& out_dir) {
    const SimulateResult res = run_simulation(cfg);
    write_simulation_outputs(cfg, res, out_dir);
    return res.failed ? 1 : 0;
}

SweepResult run_sweep(const SweepPlan& plan, const std::string& out_dir, std::size_t workers) {
    const std::size_t npts = plan.values.size();
    std::vector<RunConfig> cfgs;
    for (std::size_t i = 0; i < npts; ++i) cfgs.push_back(sweep_point_config(plan, i));

    std::vector<SimulateResult> results(npts);
    std::vector<std::string> errors(npts);
    std::atomic<std::size_t> cursor{0};
    const auto work = [&]() {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= npts) break;
            try {
                results[i] = run_simulation(cfgs[i]);
                write_simulation_outputs(cfgs[i], results[i],
                                         fs::path(out_dir) / ("point_" + std::to_string(i)));
                if (results[i].failed) errors[i] = results[i].failure;
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const std::size_t pool = std::min(npts, std::max<std::size_t>(
                                                1, workers ? workers : plan.workers));
    if (pool <= 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < pool; ++w) threads.emplace_back(work);
        for (auto& t : threads) t.join();
    }

    SweepResult sweep;
    for (std::size_t i = 0; i < npts; ++i) {
        SweepPointOutcome p;
        p.value = plan.values[i];
        p.t_max = cfgs[i].time.t_max;
        if (!errors[i].empty()) {
            p.failed = true;
            p.message = errors[i];
            sweep.any_failed = true;
        } else {
            p.excess = results[i].final_certificate.excess;
            p.exit_time = results[i].exit_time;
        }
        sweep.points.push_back(std::move(p));
    }
    sweep.csv = build_sweep_csv(plan, sweep.points);

    std::ostringstream sum;
    sum << "sweep over " << plan.parameter << " with " << npts << " points\n";
    for (std::size_t i = 0; i < npts; ++i) {
        const auto& p = sweep.points[i];
        sum << "point " << i << ": " << plan.parameter << "=" << cell(p.value) << " -> ";
        if (p.failed)
            sum << "FAILED " << p.message;
        else {
            sum << "excess=" << cell(p.excess) << ", exit="
                << (p.exit_time ? cell(*p.exit_time) : std::string("censored"));
        }
        sum << "\n";
    }
    // Reuse the fit/censoring commentary verbatim from the CSV.
    std::istringstream csv(sweep.csv);
    std::string line;
    while (std::getline(csv, line))
        if (!line.empty() && line[0] == '#') sum << line.substr(2) << "\n";
    sweep.summary = sum.str();
    return sweep;
}

int cmd_sweep(const SweepPlan& plan, const std::string& out_dir, std::size_t workers) {
    fs::create_directories(out_dir);
    const SweepResult sweep = run_sweep(plan, out_dir, workers);
    write_text(fs::path(out_dir) / "sweep.csv", sweep.csv);
    write_text(fs::path(out_dir) / "sweep_summary.txt", sweep.summary);
    return sweep.any_failed ? 1 : 0;
}

int cmd_profile(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path path = fs::path(out_dir) / "profile.txt";
    if (cfg.potential.components() == 1) {
        const ScalarPotential p = scalar_potential_of(cfg.potential);
        const StepProfile v =
            build_step(cfg.a, cfg.b, cfg.profile.jumps, cfg.profile.r, cfg.profile.left_value);
        write_grid_function(path.string(), build_layer_profile(v, p, cfg.eps, cfg.n));
        return 0;
    }
    const VectorPotential p = vector_potential_of(cfg.potential);
    const VectorStepProfile v = build_vector_step(cfg.a, cfg.b, cfg.profile.jumps, cfg.profile.r,
                                                  cfg.profile.labels, p);
    PhiCache cache;
    const auto u = build_vector_layer_profile(v, p, cfg.eps, cfg.n, cache);
    std::ostringstream out;
    for (std::size_t i = 0; i < cfg.n; ++i) {
        out << format17(u[0].x(i));
        for (const GridFunction& c : u) out << " " << format17(c.values[i]);
        out << "\n";
    }
    write_text(path, out.str());
    return 0;
}

int cmd_certify(const RunConfig& cfg, const std::string& snapshot_path, std::string& report) {
    const Snapshot snap = read_snapshot(snapshot_path);
    const std::size_t m = cfg.potential.components();
    if (snap.m != m)
        throw std::invalid_argument("certify: snapshot has m=" + std::to_string(snap.m) +
                                    " components, potential \"" + cfg.potential.type +
                                    "\" has m=" + std::to_string(m));
    const double tol = 1e-9 * (cfg.b - cfg.a);
    if (std::abs(snap.a - cfg.a) > tol || std::abs(snap.b - cfg.b) > tol)
        throw std::invalid_argument("certify: snapshot domain [" + format17(snap.a) + ", " +
                                    format17(snap.b) + "] does not match the config domain");

    LowerBoundCertificate cert;
    if (m == 1) {
        const ScalarPotential p = scalar_potential_of(cfg.potential);
        const StepProfile v =
            build_step(cfg.a, cfg.b, cfg.profile.jumps, cfg.profile.r, cfg.profile.left_value);
        cert = lower_bound_certificate(snap.u[0], v, p, snap.eps, cfg.stop.certificate_a,
                                       boundary_mode_of(cfg));
    } else {
        const VectorPotential p = vector_potential_of(cfg.potential);
        const VectorStepProfile v = build_vector_step(
            cfg.a, cfg.b, cfg.profile.jumps, cfg.profile.r, cfg.profile.labels, p);
        PhiCache cache;
        cert = vector_lower_bound_certificate(snap.u, v, p, snap.eps, cfg.stop.certificate_a,
                                              cache);
    }
    std::ostringstream out;
    out << "snapshot: " << snapshot_path << " (t=" << cell(snap.t) << ", eps=" << cell(snap.eps)
        << ", m=" << snap.m << ")\n";
    describe_certificate(out, "snapshot", cert);
    report = out.str();
    return 0;
}

GridFunction standing_wave_table(const ScalarPotential& p, double xmax, double dx) {
    if (!(xmax > 0.0) || !(dx > 0.0) || dx > xmax)
        throw std::invalid_argument("standing_wave_table: requires 0 < dx <= xmax");
    const auto half = static_cast<std::size_t>(std::llround(xmax / dx));
    const std::size_t n = 2 * half + 1;
    const double lim = dx * static_cast<double>(half);
    const double lo = p.wells[0];
    const double hi = p.wells[1];
    const auto f = [&p, lo, hi](double w) {
        const double c = std::clamp(w, lo, hi);
        return std::sqrt(std::max(0.0, 2.0 * p.eval(c)));
    };
    const auto rk4 = [&f, lo, hi](double w, double h) {
        const double k1 = f(w);
        const double k2 = f(w + 0.5 * h * k1);
        const double k3 = f(w + 0.5 * h * k2);
        const double k4 = f(w + h * k3);
        return std::clamp(w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4), lo, hi);
    };
    std::vector<double> vals(n, 0.0);
    vals[half] = 0.5 * (lo + hi);
    for (std::size_t i = half + 1; i < n; ++i) vals[i] = rk4(vals[i - 1], dx);
    for (std::size_t i = half; i-- > 0;) vals[i] = rk4(vals[i + 1], -dx);
    return GridFunction(-lim, lim, std::move(vals));
}

}  // namespace hch

#include "hch/config.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace hch {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("config: " + msg); }

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(where + " must be an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) {
                ok = true;
                break;
            }
        if (!ok) fail("unknown key \"" + it.key() + "\" in " + where);
    }
}

double get_number(const json& obj, const std::string& where, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) fail(where + "." + key + " must be a number");
    return v.get<double>();
}

std::uint64_t get_index(const json& obj, const std::string& where, const char* key,
                        std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) fail(where + "." + key + " must be a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& where, const char* key,
                       const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) fail(where + "." + key + " must be a string");
    return v.get<std::string>();
}

std::vector<double> number_list(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where + " must be an array of numbers");
    std::vector<double> out;
    for (const json& e : v) {
        if (!e.is_number()) fail(where + " must contain only numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

std::array<double, 2> well_pair(const json& v, const std::string& where) {
    const auto list = number_list(v, where);
    if (list.size() != 2) fail(where + " must hold exactly two values");
    if (!(list[0] < list[1])) fail(where + " must be increasing");
    return {list[0], list[1]};
}

PotentialConfig parse_potential(const json& j) {
    PotentialConfig pc;
    if (j.is_null()) return pc;
    pc.type = get_string(j, "potential", "type", "quartic");
    if (pc.type == "quartic") {
        require_keys(j, "potential", {"type"});
    } else if (pc.type == "polynomial") {
        require_keys(j, "potential", {"type", "coefficients", "wells"});
        if (!j.contains("coefficients")) fail("potential.coefficients is required");
        if (!j.contains("wells")) fail("potential.wells is required");
        pc.coefficients = number_list(j.at("coefficients"), "potential.coefficients");
        pc.wells = well_pair(j.at("wells"), "potential.wells");
    } else if (pc.type == "decoupled-quartic") {
        require_keys(j, "potential", {"type", "m"});
        pc.m = static_cast<std::size_t>(get_index(j, "potential", "m", 1));
        if (pc.m == 0) fail("potential.m must be at least 1");
    } else if (pc.type == "polynomial-sum") {
        require_keys(j, "potential", {"type", "components"});
        if (!j.contains("components") || !j.at("components").is_array() ||
            j.at("components").empty())
            fail("potential.components must be a non-empty array");
        for (const json& c : j.at("components")) {
            require_keys(c, "potential.components[]", {"coefficients", "wells"});
            if (!c.contains("coefficients") || !c.contains("wells"))
                fail("potential.components[] needs coefficients and wells");
            pc.sum_coefficients.push_back(
                number_list(c.at("coefficients"), "potential.components[].coefficients"));
            pc.sum_wells.push_back(well_pair(c.at("wells"), "potential.components[].wells"));
        }
    } else {
        fail("potential.type \"" + pc.type + "\" is not recognized");
    }
    return pc;
}

json dump_potential(const PotentialConfig& pc) {
    json j;
    j["type"] = pc.type;
    if (pc.type == "polynomial") {
        j["coefficients"] = pc.coefficients;
        j["wells"] = {pc.wells[0], pc.wells[1]};
    } else if (pc.type == "decoupled-quartic") {
        j["m"] = pc.m;
    } else if (pc.type == "polynomial-sum") {
        json comps = json::array();
        for (std::size_t i = 0; i < pc.sum_coefficients.size(); ++i) {
            json c;
            c["coefficients"] = pc.sum_coefficients[i];
            c["wells"] = {pc.sum_wells[i][0], pc.sum_wells[i][1]};
            comps.push_back(std::move(c));
        }
        j["components"] = std::move(comps);
    }
    return j;
}

int plateau_sign(const ProfileConfig& p, bool right) {
    const int flips = right ? static_cast<int>(p.jumps.size()) : 0;
    return flips % 2 == 0 ? p.left_value : -p.left_value;
}

void cross_validate(const RunConfig& cfg) {
    if (cfg.formulation == "flux" && cfg.boundary != "neumann") fail("flux requires neumann");
    const double dx = (cfg.b - cfg.a) / static_cast<double>(cfg.n - 1);
    if (dx > cfg.eps / 4.0)
        fail("domain.n = " + std::to_string(cfg.n) + " gives dx > eps/4 at eps = " +
             std::to_string(cfg.eps));
    const std::size_t m = cfg.potential.components();
    if (m > 1) {
        if (cfg.boundary != "neumann") fail("vector potentials require neumann boundary");
        if (cfg.formulation != "second-order")
            fail("vector potentials require the second-order formulation");
        if (cfg.profile.labels.size() != cfg.profile.jumps.size() + 1)
            fail("profile.labels must list " + std::to_string(cfg.profile.jumps.size() + 1) +
                 " plateaus for profile.jumps of size " +
                 std::to_string(cfg.profile.jumps.size()));
    } else if (!cfg.profile.labels.empty()) {
        fail("profile.labels applies only to vector potentials (potential.type = \"" +
             cfg.potential.type + "\")");
    }
    if (cfg.boundary == "dirichlet") {
        if (cfg.left_sign != plateau_sign(cfg.profile, false))
            fail("boundary.left_sign = " + std::to_string(cfg.left_sign) +
                 " contradicts profile.left_value = " + std::to_string(cfg.profile.left_value));
        if (cfg.right_sign != plateau_sign(cfg.profile, true))
            fail("boundary.right_sign = " + std::to_string(cfg.right_sign) +
                 " contradicts the profile plateau (" +
                 std::to_string(plateau_sign(cfg.profile, true)) + ") after " +
                 std::to_string(cfg.profile.jumps.size()) + " jumps");
    }
}

RunConfig parse_run(const json& j) {
    require_keys(j, "config",
                 {"potential", "domain", "eps", "tau", "boundary", "formulation", "profile",
                  "velocity", "time", "stop", "seed"});
    RunConfig cfg;
    cfg.potential = parse_potential(j.contains("potential") ? j.at("potential") : json());

    if (j.contains("domain")) {
        const json& d = j.at("domain");
        require_keys(d, "domain", {"a", "b", "n"});
        cfg.a = get_number(d, "domain", "a", cfg.a);
        cfg.b = get_number(d, "domain", "b", cfg.b);
        cfg.n = static_cast<std::size_t>(get_index(d, "domain", "n", cfg.n));
    }
    if (!(cfg.a < cfg.b)) fail("domain requires a < b");
    if (cfg.n < 8) fail("domain.n must be at least 8");

    cfg.eps = get_number(j, "config", "eps", cfg.eps);
    if (!(cfg.eps > 0.0)) fail("eps must be positive");
    cfg.tau = get_number(j, "config", "tau", cfg.tau);
    if (cfg.tau < 0.0) fail("tau must be non-negative");

    cfg.formulation = get_string(j, "config", "formulation", cfg.formulation);
    if (cfg.formulation != "second-order" && cfg.formulation != "flux" &&
        cfg.formulation != "classic")
        fail("formulation \"" + cfg.formulation + "\" is not recognized");

    if (j.contains("profile")) {
        const json& p = j.at("profile");
        require_keys(p, "profile", {"jumps", "r", "left_value", "labels"});
        if (p.contains("jumps")) cfg.profile.jumps = number_list(p.at("jumps"), "profile.jumps");
        cfg.profile.r = get_number(p, "profile", "r", cfg.profile.r);
        if (p.contains("left_value")) {
            const json& lv = p.at("left_value");
            if (!lv.is_number_integer()) fail("profile.left_value must be -1 or 1");
            cfg.profile.left_value = lv.get<int>();
        }
        if (cfg.profile.left_value != -1 && cfg.profile.left_value != 1)
            fail("profile.left_value must be -1 or 1");
        if (p.contains("labels")) {
            if (!p.at("labels").is_array()) fail("profile.labels must be an array");
            for (const json& e : p.at("labels")) {
                if (!e.is_number_unsigned())
                    fail("profile.labels must contain non-negative integers");
                cfg.profile.labels.push_back(e.get<std::size_t>());
            }
        }
    }
    if (!(cfg.profile.r > 0.0)) fail("profile.r must be positive");

    if (j.contains("boundary")) {
        const json& bnd = j.at("boundary");
        require_keys(bnd, "boundary", {"kind", "left_sign", "right_sign"});
        cfg.boundary = get_string(bnd, "boundary", "kind", cfg.boundary);
        if (cfg.boundary != "neumann" && cfg.boundary != "dirichlet")
            fail("boundary.kind \"" + cfg.boundary + "\" is not recognized");
        const int dl = plateau_sign(cfg.profile, false);
        const int dr = plateau_sign(cfg.profile, true);
        cfg.left_sign = static_cast<int>(get_number(bnd, "boundary", "left_sign", dl));
        cfg.right_sign = static_cast<int>(get_number(bnd, "boundary", "right_sign", dr));
    } else {
        cfg.left_sign = plateau_sign(cfg.profile, false);
        cfg.right_sign = plateau_sign(cfg.profile, true);
    }

    cfg.seed = get_index(j, "config", "seed", cfg.seed);

    if (j.contains("velocity")) {
        const json& v = j.at("velocity");
        require_keys(v, "velocity", {"type", "amplitude", "seed", "path"});
        cfg.velocity.type = get_string(v, "velocity", "type", cfg.velocity.type);
        if (cfg.velocity.type == "zero") {
            if (v.contains("amplitude") || v.contains("seed") || v.contains("path"))
                fail("velocity of type \"zero\" takes no other keys");
        } else if (cfg.velocity.type == "noise") {
            if (v.contains("path")) fail("velocity of type \"noise\" takes no path");
            cfg.velocity.amplitude = get_number(v, "velocity", "amplitude", 0.0);
            if (!(cfg.velocity.amplitude >= 0.0)) fail("velocity.amplitude must be >= 0");
            cfg.velocity.seed = get_index(v, "velocity", "seed", cfg.seed);
        } else if (cfg.velocity.type == "file") {
            if (v.contains("amplitude") || v.contains("seed"))
                fail("velocity of type \"file\" takes only a path");
            cfg.velocity.path = get_string(v, "velocity", "path", "");
            if (cfg.velocity.path.empty()) fail("velocity.path is required for type \"file\"");
        } else {
            fail("velocity.type \"" + cfg.velocity.type + "\" is not recognized");
        }
    }

    if (j.contains("time")) {
        const json& t = j.at("time");
        require_keys(t, "time", {"dt", "t_max", "output_every", "snapshots"});
        if (t.contains("dt")) {
            const json& dt = t.at("dt");
            if (dt.is_string()) {
                if (dt.get<std::string>() != "auto") fail("time.dt must be a number or \"auto\"");
                cfg.time.auto_dt = true;
            } else if (dt.is_number()) {
                cfg.time.auto_dt = false;
                cfg.time.dt = dt.get<double>();
                if (!(cfg.time.dt > 0.0)) fail("time.dt must be positive");
            } else {
                fail("time.dt must be a number or \"auto\"");
            }
        }
        cfg.time.t_max = get_number(t, "time", "t_max", cfg.time.t_max);
        if (!(cfg.time.t_max >= 0.0)) fail("time.t_max must be >= 0");
        cfg.time.output_every =
            static_cast<std::size_t>(get_index(t, "time", "output_every", cfg.time.output_every));
        if (cfg.time.output_every == 0) fail("time.output_every must be at least 1");
        if (t.contains("snapshots"))
            cfg.time.snapshots = number_list(t.at("snapshots"), "time.snapshots");
    }

    if (j.contains("stop")) {
        const json& s = j.at("stop");
        require_keys(s, "stop", {"delta1", "K", "A"});
        cfg.stop.delta1 = get_number(s, "stop", "delta1", cfg.stop.delta1);
        if (!(cfg.stop.delta1 > 0.0)) fail("stop.delta1 must be positive");
        if (s.contains("K")) {
            if (!s.at("K").is_array() || s.at("K").empty())
                fail("stop.K must be a non-empty array of intervals");
            cfg.stop.kband.clear();
            for (const json& iv : s.at("K"))
                cfg.stop.kband.push_back(well_pair(iv, "stop.K[]"));
        }
        cfg.stop.certificate_a = get_number(s, "stop", "A", cfg.stop.certificate_a);
        if (!(cfg.stop.certificate_a > 0.0)) fail("stop.A must be positive");
    }

    cross_validate(cfg);
    return cfg;
}

json dump_run(const RunConfig& cfg) {
    json j;
    j["potential"] = dump_potential(cfg.potential);
    j["domain"] = {{"a", cfg.a}, {"b", cfg.b}, {"n", cfg.n}};
    j["eps"] = cfg.eps;
    j["tau"] = cfg.tau;
    json bnd;
    bnd["kind"] = cfg.boundary;
    if (cfg.boundary == "dirichlet") {
        bnd["left_sign"] = cfg.left_sign;
        bnd["right_sign"] = cfg.right_sign;
    }
    j["boundary"] = std::move(bnd);
    j["formulation"] = cfg.formulation;
    json prof;
    prof["jumps"] = cfg.profile.jumps;
    prof["r"] = cfg.profile.r;
    if (cfg.potential.components() > 1)
        prof["labels"] = cfg.profile.labels;
    else
        prof["left_value"] = cfg.profile.left_value;
    j["profile"] = std::move(prof);
    json vel;
    vel["type"] = cfg.velocity.type;
    if (cfg.velocity.type == "noise") {
        vel["amplitude"] = cfg.velocity.amplitude;
        vel["seed"] = cfg.velocity.seed;
    } else if (cfg.velocity.type == "file") {
        vel["path"] = cfg.velocity.path;
    }
    j["velocity"] = std::move(vel);
    json t;
    if (cfg.time.auto_dt)
        t["dt"] = "auto";
    else
        t["dt"] = cfg.time.dt;
    t["t_max"] = cfg.time.t_max;
    t["output_every"] = cfg.time.output_every;
    t["snapshots"] = cfg.time.snapshots;
    j["time"] = std::move(t);
    json s;
    s["delta1"] = cfg.stop.delta1;
    json kb = json::array();
    for (const auto& iv : cfg.stop.kband) kb.push_back({iv[0], iv[1]});
    s["K"] = std::move(kb);
    s["A"] = cfg.stop.certificate_a;
    j["stop"] = std::move(s);
    j["seed"] = cfg.seed;
    return j;
}

json parse_text(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument(std::string(what) + ": malformed JSON");
    return j;
}

}  // namespace

std::size_t PotentialConfig::components() const {
    if (type == "decoupled-quartic") return m;
    if (type == "polynomial-sum") return sum_coefficients.size();
    return 1;
}

RunConfig parse_config(const std::string& text) {
    return parse_run(parse_text(text, "parse_config"));
}

std::string serialize_config(const RunConfig& cfg) { return dump_run(cfg).dump(2) + "\n"; }

SweepPlan parse_sweep(const std::string& text) {
    const json j = parse_text(text, "parse_sweep");
    require_keys(j, "sweep", {"base", "axis", "overrides", "workers"});
    if (!j.contains("base")) fail("sweep.base is required");
    if (!j.contains("axis")) fail("sweep.axis is required");
    SweepPlan plan;
    plan.base = parse_run(j.at("base"));
    const json& axis = j.at("axis");
    require_keys(axis, "axis", {"parameter", "values"});
    plan.parameter = get_string(axis, "axis", "parameter", plan.parameter);
    if (plan.parameter != "eps" && plan.parameter != "tau")
        fail("axis.parameter must be \"eps\" or \"tau\"");
    if (!axis.contains("values")) fail("axis.values is required");
    plan.values = number_list(axis.at("values"), "axis.values");
    if (plan.values.size() < 2) fail("axis.values needs at least 2 points for fits");
    for (double v : plan.values) {
        if (plan.parameter == "eps" && !(v > 0.0)) fail("axis.values (eps) must be positive");
        if (plan.parameter == "tau" && v < 0.0) fail("axis.values (tau) must be non-negative");
    }
    if (j.contains("overrides")) {
        if (!j.at("overrides").is_array()) fail("sweep.overrides must be an array of objects");
        for (const json& o : j.at("overrides")) {
            if (!o.is_object()) fail("sweep.overrides must contain objects");
            plan.overrides.push_back(o.dump());
        }
        if (plan.overrides.size() != plan.values.size())
            fail("sweep.overrides must match axis.values in length (" +
                 std::to_string(plan.values.size()) + "), got " +
                 std::to_string(plan.overrides.size()));
    }
    plan.workers = static_cast<std::size_t>(get_index(j, "sweep", "workers", plan.workers));
    if (plan.workers == 0) fail("sweep.workers must be at least 1");

    // Every merged point must itself be a valid config.
    for (std::size_t i = 0; i < plan.values.size(); ++i) {
        try {
            sweep_point_config(plan, i);
        } catch (const std::exception& e) {
            fail("sweep point " + std::to_string(i) + ": " + e.what());
        }
    }
    return plan;
}

RunConfig sweep_point_config(const SweepPlan& plan, std::size_t i) {
    if (i >= plan.values.size())
        throw std::out_of_range("sweep_point_config: point " + std::to_string(i) +
                                " of " + std::to_string(plan.values.size()));
    json merged = dump_run(plan.base);
    merged[plan.parameter] = plan.values[i];
    if (!plan.overrides.empty()) merged.merge_patch(json::parse(plan.overrides[i]));
    return parse_run(merged);
}

std::string serialize_sweep(const SweepPlan& plan) {
    json j;
    j["base"] = dump_run(plan.base);
    j["axis"] = {{"parameter", plan.parameter}, {"values", plan.values}};
    if (!plan.overrides.empty()) {
        json o = json::array();
        for (const auto& s : plan.overrides) o.push_back(json::parse(s));
        j["overrides"] = std::move(o);
    }
    j["workers"] = plan.workers;
    return j.dump(2) + "\n";
}

ScalarPotential scalar_potential_of(const PotentialConfig& pc) {
    if (pc.type == "quartic") return make_quartic();
    if (pc.type == "polynomial") return make_polynomial(pc.coefficients, pc.wells);
    throw std::invalid_argument("scalar_potential_of: \"" + pc.type +
                                "\" is not a scalar potential");
}

VectorPotential vector_potential_of(const PotentialConfig& pc) {
    if (pc.type == "decoupled-quartic") return make_decoupled_quartic(pc.m);
    if (pc.type == "polynomial-sum") return make_polynomial_sum(pc.sum_coefficients, pc.sum_wells);
    return embed_scalar(scalar_potential_of(pc));
}

BoundaryMode boundary_mode_of(const RunConfig& cfg) {
    BoundaryMode mode;
    mode.kind = cfg.boundary == "dirichlet" ? BoundaryKind::DirichletWells
                                            : BoundaryKind::NeumannHomogeneous;
    mode.left_sign = cfg.left_sign;
    mode.right_sign = cfg.right_sign;
    return mode;
}

Formulation formulation_of(const RunConfig& cfg) {
    if (cfg.formulation == "flux") return Formulation::Flux;
    if (cfg.formulation == "classic") return Formulation::ClassicCH;
    return Formulation::SecondOrder;
}

SolverConfig solver_config_of(const RunConfig& cfg) {
    SolverConfig sc;
    sc.eps = cfg.eps;
    sc.tau = cfg.tau;
    sc.dt = cfg.time.auto_dt ? 0.0 : cfg.time.dt;
    sc.t_max = cfg.time.t_max;
    sc.formulation = formulation_of(cfg);
    sc.boundary = boundary_mode_of(cfg);
    return sc;
}

}  // namespace hch

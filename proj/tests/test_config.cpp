#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "hch/config.hpp"
#include "hch/potential.hpp"
#include "hch/solver.hpp"

using namespace hch;
using doctest::Contains;

TEST_CASE("minimal config materializes the documented defaults") {
    const RunConfig cfg = parse_config("{}");
    CHECK(cfg.potential.type == "quartic");
    CHECK(cfg.potential.components() == 1);
    CHECK(cfg.a == 0.0);
    CHECK(cfg.b == 1.0);
    CHECK(cfg.n == 512);
    CHECK(cfg.eps == 0.05);
    CHECK(cfg.tau == 1.0);
    CHECK(cfg.boundary == "neumann");
    CHECK(cfg.formulation == "second-order");
    REQUIRE(cfg.profile.jumps.size() == 2);
    CHECK(cfg.profile.jumps[0] == doctest::Approx(1.0 / 3.0));
    CHECK(cfg.profile.jumps[1] == doctest::Approx(2.0 / 3.0));
    CHECK(cfg.profile.r == doctest::Approx(1.0 / 6.0));
    CHECK(cfg.profile.left_value == -1);
    CHECK(cfg.velocity.type == "zero");
    CHECK(cfg.time.auto_dt);
    CHECK(cfg.time.t_max == 1.0);
    CHECK(cfg.time.output_every == 10);
    CHECK(cfg.time.snapshots.empty());
    CHECK(cfg.stop.delta1 == doctest::Approx(1.0 / 12.0));
    REQUIRE(cfg.stop.kband.size() == 1);
    CHECK(cfg.stop.kband[0][0] == -0.5);
    CHECK(cfg.stop.kband[0][1] == 0.5);
    CHECK(cfg.stop.certificate_a == 0.3);
    CHECK(cfg.seed == 0);
}

TEST_CASE("serialize then parse is the identity on the serialized text") {
    const char* texts[] = {
        "{}",
        R"({"potential":{"type":"polynomial","coefficients":[0.25,0,-0.5,0,0.25],
            "wells":[-1,1]},
            "domain":{"a":-1,"b":2,"n":900},"eps":0.08,"tau":0.25,
            "boundary":{"kind":"dirichlet","left_sign":-1,"right_sign":-1},
            "formulation":"second-order",
            "profile":{"jumps":[0.2,0.9],"r":0.3,"left_value":-1},
            "velocity":{"type":"noise","amplitude":0.02,"seed":9},
            "time":{"dt":0.001,"t_max":2.5,"output_every":5,"snapshots":[0.5,1.5]},
            "stop":{"delta1":0.05,"K":[[-0.4,0.4]],"A":0.2},
            "seed":11})",
        R"({"potential":{"type":"decoupled-quartic","m":2},
            "profile":{"jumps":[0.35,0.65],"r":0.15,"labels":[0,3,1]},
            "eps":0.01,"domain":{"n":2048}})",
        R"({"potential":{"type":"polynomial-sum","components":[
              {"coefficients":[0.25,0,-0.5,0,0.25],"wells":[-1,1]},
              {"coefficients":[0.25,0,-0.5,0,0.25],"wells":[-1,1]}]},
            "profile":{"jumps":[0.5],"r":0.2,"labels":[0,3]},
            "eps":0.02,"domain":{"n":1024}})",
        R"({"formulation":"flux","velocity":{"type":"file","path":"w0.txt"}})",
        R"({"formulation":"classic","tau":0})",
    };
    for (const char* text : texts) {
        CAPTURE(text);
        const std::string once = serialize_config(parse_config(text));
        const std::string twice = serialize_config(parse_config(once));
        CHECK(once == twice);
    }
}

TEST_CASE("unknown keys are rejected with their location") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"epsilon":0.05})"),
                         Contains("unknown key \"epsilon\""), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"domain":{"a":0,"b":1,"n":512,"m":3}})"),
                         Contains("unknown key \"m\" in domain"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"time":{"stride":5}})"),
                         Contains("unknown key \"stride\" in time"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("not json"), Contains("malformed JSON"),
                         std::invalid_argument);
}

TEST_CASE("cross-field rules name the offending pair") {
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"formulation":"flux","boundary":{"kind":"dirichlet"}})"),
        Contains("flux requires neumann"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"domain":{"n":16},"eps":0.05})"),
                         Contains("gives dx > eps/4"), std::invalid_argument);
    // The default profile starts at -1, so left_sign 1 contradicts it.
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"boundary":{"kind":"dirichlet","left_sign":1}})"),
        Contains("boundary.left_sign = 1"), std::invalid_argument);
    // Two jumps flip the sign twice: the right plateau is also -1.
    CHECK_THROWS_WITH_AS(
        parse_config(R"({"boundary":{"kind":"dirichlet","right_sign":1}})"),
        Contains("boundary.right_sign = 1"), std::invalid_argument);
    CHECK_NOTHROW(parse_config(R"({"boundary":{"kind":"dirichlet"}})"));
}

TEST_CASE("vector potentials demand neumann, second-order and full labels") {
    const std::string vec = R"({"potential":{"type":"decoupled-quartic","m":2},
                                "eps":0.01,"domain":{"n":2048},)";
    CHECK_THROWS_WITH_AS(parse_config(vec + R"("profile":{"labels":[0,3,1]},
                                              "boundary":{"kind":"dirichlet"}})"),
                         Contains("vector potentials require neumann"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(vec + R"("profile":{"labels":[0,3,1]},
                                              "formulation":"classic"})"),
                         Contains("second-order formulation"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(vec + R"("profile":{"labels":[0,3]}})"),
                         Contains("profile.labels must list 3"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(vec.substr(0, vec.size() - 1) + "}"),
                         Contains("profile.labels must list"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"profile":{"labels":[0,1,0]}})"),
                         Contains("applies only to vector potentials"), std::invalid_argument);
}

TEST_CASE("velocity families are strict about their keys") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"velocity":{"type":"zero","amplitude":1}})"),
                         Contains("takes no other keys"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"velocity":{"type":"noise","path":"x"}})"),
                         Contains("takes no path"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"velocity":{"type":"file"}})"),
                         Contains("velocity.path is required"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"velocity":{"type":"ramp"}})"),
                         Contains("velocity.type \"ramp\""), std::invalid_argument);

    // An unseeded noise family follows the run seed.
    const RunConfig a = parse_config(R"({"seed":7,"velocity":{"type":"noise"}})");
    CHECK(a.velocity.seed == 7);
    const RunConfig b =
        parse_config(R"({"seed":7,"velocity":{"type":"noise","seed":3}})");
    CHECK(b.velocity.seed == 3);
}

TEST_CASE("time block validates dt, t_max and the output stride") {
    CHECK(parse_config(R"({"time":{"dt":"auto"}})").time.auto_dt);
    const RunConfig c = parse_config(R"({"time":{"dt":0.001}})");
    CHECK_FALSE(c.time.auto_dt);
    CHECK(c.time.dt == 0.001);
    CHECK_THROWS_WITH_AS(parse_config(R"({"time":{"dt":0}})"),
                         Contains("time.dt must be positive"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"time":{"dt":true}})"),
                         Contains("must be a number or \"auto\""), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"time":{"dt":"fast"}})"),
                         Contains("must be a number or \"auto\""), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"time":{"t_max":-1}})"),
                         Contains("t_max must be >= 0"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"time":{"output_every":0}})"),
                         Contains("output_every must be at least 1"), std::invalid_argument);
}

TEST_CASE("potential and stop blocks reject malformed shapes") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"potential":{"type":"cubic"}})"),
                         Contains("potential.type \"cubic\""), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"potential":{"type":"polynomial"}})"),
                         Contains("potential.coefficients is required"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"potential":{"type":"decoupled-quartic","m":0}})"),
                         Contains("potential.m must be at least 1"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"stop":{"K":[]}})"),
                         Contains("stop.K must be a non-empty array"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"stop":{"K":[[0.5,-0.5]]}})"),
                         Contains("must be increasing"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"stop":{"A":0}})"),
                         Contains("stop.A must be positive"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"eps":0})"), Contains("eps must be positive"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config(R"({"tau":-0.1})"), Contains("tau must be non-negative"),
                         std::invalid_argument);
}

TEST_CASE("factories map the parsed names onto solver types") {
    const RunConfig cfg = parse_config(
        R"({"formulation":"flux","time":{"dt":0.25,"t_max":3},"eps":0.07,"tau":0.4})");
    const SolverConfig sc = solver_config_of(cfg);
    CHECK(sc.eps == 0.07);
    CHECK(sc.tau == 0.4);
    CHECK(sc.dt == 0.25);
    CHECK(sc.t_max == 3.0);
    CHECK(sc.formulation == Formulation::Flux);
    CHECK(sc.boundary.kind == BoundaryKind::NeumannHomogeneous);

    CHECK(solver_config_of(parse_config("{}")).dt == 0.0);  // resolved later
    CHECK(formulation_of(parse_config(R"({"formulation":"classic","tau":0})")) ==
          Formulation::ClassicCH);
    CHECK(boundary_mode_of(parse_config(R"({"boundary":{"kind":"dirichlet"}})")).kind ==
          BoundaryKind::DirichletWells);

    const PotentialConfig quartic = parse_config("{}").potential;
    CHECK(scalar_potential_of(quartic).eval(1.0) == 0.0);
    CHECK(vector_potential_of(quartic).m == 1);  // scalar embedding
    const PotentialConfig vec =
        parse_config(R"({"potential":{"type":"decoupled-quartic","m":3},
                         "profile":{"labels":[0,7,1]},"eps":0.01,"domain":{"n":2048}})")
            .potential;
    CHECK(vector_potential_of(vec).m == 3);
    CHECK_THROWS_WITH_AS(scalar_potential_of(vec), Contains("not a scalar potential"),
                         std::invalid_argument);
}

TEST_CASE("sweep plans parse, validate every merged point and round-trip") {
    const std::string plan_text = R"({
      "base": {"eps": 0.1, "time": {"dt": 0.001, "t_max": 0.01}},
      "axis": {"parameter": "eps", "values": [0.1, 0.08, 0.06]},
      "workers": 2
    })";
    const SweepPlan plan = parse_sweep(plan_text);
    CHECK(plan.parameter == "eps");
    REQUIRE(plan.values.size() == 3);
    CHECK(plan.workers == 2);
    CHECK(plan.overrides.empty());

    const RunConfig p1 = sweep_point_config(plan, 1);
    CHECK(p1.eps == 0.08);
    CHECK(p1.time.dt == 0.001);
    CHECK_THROWS_AS(sweep_point_config(plan, 3), std::out_of_range);

    const std::string once = serialize_sweep(plan);
    CHECK(serialize_sweep(parse_sweep(once)) == once);
}

TEST_CASE("sweep overrides are per-point merge patches") {
    const std::string text = R"({
      "base": {"eps": 0.1, "time": {"dt": 0.001, "t_max": 0.01}},
      "axis": {"parameter": "tau", "values": [0.5, 1.0]},
      "overrides": [{}, {"time": {"t_max": 0.5}, "seed": 5}]
    })";
    const SweepPlan plan = parse_sweep(text);
    CHECK(sweep_point_config(plan, 0).time.t_max == 0.01);
    CHECK(sweep_point_config(plan, 0).tau == 0.5);
    const RunConfig p1 = sweep_point_config(plan, 1);
    CHECK(p1.tau == 1.0);
    CHECK(p1.time.t_max == 0.5);
    CHECK(p1.seed == 5);
    CHECK(p1.eps == 0.1);  // base survives the patch
}

TEST_CASE("sweep plan rejections") {
    CHECK_THROWS_WITH_AS(parse_sweep(R"({"axis":{"parameter":"eps","values":[0.1,0.2]}})"),
                         Contains("sweep.base is required"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_sweep(R"({"base":{},"axis":{"parameter":"eps","values":[0.1]}})"),
                         Contains("at least 2 points"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_sweep(R"({"base":{},"axis":{"parameter":"sigma","values":[1,2]}})"),
        Contains("axis.parameter must be"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_sweep(R"({"base":{},"axis":{"parameter":"eps","values":[0.1,0.2]},
                        "overrides":[{}]})"),
        Contains("must match axis.values in length"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_sweep(R"({"base":{},"axis":{"parameter":"eps","values":[0.1,-0.2]}})"),
        Contains("(eps) must be positive"), std::invalid_argument);
    // A point whose merged config is invalid fails at parse time.
    CHECK_THROWS_WITH_AS(
        parse_sweep(R"({"base":{},"axis":{"parameter":"eps","values":[0.1,0.001]}})"),
        Contains("sweep point 1"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        parse_sweep(R"({"base":{},"axis":{"parameter":"eps","values":[0.1,0.2]},"workers":0})"),
        Contains("sweep.workers must be at least 1"), std::invalid_argument);
}

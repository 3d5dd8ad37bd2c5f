#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hch/boundary.hpp"
#include "hch/potential.hpp"
#include "hch/solver.hpp"

namespace hch {

// Declarative run description: every field is materialized to a concrete
// value at parse time so serialize(parse(text)) round-trips exactly.
struct PotentialConfig {
    std::string type = "quartic";  // quartic | polynomial | decoupled-quartic | polynomial-sum
    std::vector<double> coefficients;                // polynomial
    std::array<double, 2> wells{-1.0, 1.0};          // polynomial
    std::size_t m = 1;                               // decoupled-quartic
    std::vector<std::vector<double>> sum_coefficients;  // polynomial-sum
    std::vector<std::array<double, 2>> sum_wells;       // polynomial-sum

    std::size_t components() const;
};

struct ProfileConfig {
    std::vector<double> jumps{1.0 / 3.0, 2.0 / 3.0};
    double r = 1.0 / 6.0;
    int left_value = -1;              // scalar plateau orientation
    std::vector<std::size_t> labels;  // vector plateau labels (m > 1)
};

struct VelocityConfig {
    std::string type = "zero";  // zero | noise | file
    double amplitude = 0.0;
    std::uint64_t seed = 0;
    std::string path;
};

struct TimeConfig {
    bool auto_dt = true;  // serialized as "dt": "auto"
    double dt = 0.0;
    double t_max = 1.0;
    std::size_t output_every = 10;
    std::vector<double> snapshots;
};

struct StopConfig {
    double delta1 = 1.0 / 12.0;
    std::vector<std::array<double, 2>> kband{{-0.5, 0.5}};
    double certificate_a = 0.3;
};

struct RunConfig {
    PotentialConfig potential;
    double a = 0.0;
    double b = 1.0;
    std::size_t n = 512;
    double eps = 0.05;
    double tau = 1.0;
    std::string boundary = "neumann";  // neumann | dirichlet
    int left_sign = -1;
    int right_sign = -1;
    std::string formulation = "second-order";  // second-order | flux | classic
    ProfileConfig profile;
    VelocityConfig velocity;
    TimeConfig time;
    StopConfig stop;
    std::uint64_t seed = 0;
};

struct SweepPlan {
    RunConfig base;
    std::string parameter = "eps";  // eps | tau
    std::vector<double> values;
    // Optional per-point JSON merge patches onto the base config (parallel to
    // values when present), each re-validated after merging.
    std::vector<std::string> overrides;
    std::size_t workers = 1;
};

// Strict parse: unknown keys rejected by name, defaults materialized,
// cross-field consistency enforced (dirichlet signs vs profile orientation,
// "flux requires neumann", dx <= eps/4, vector label shape).
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);

// Sweep plans embed a full base config; requires >= 2 axis values.
SweepPlan parse_sweep(const std::string& text);
std::string serialize_sweep(const SweepPlan& plan);

// The fully validated config of sweep point i: base with the axis value set
// and the point's override patch applied.
RunConfig sweep_point_config(const SweepPlan& plan, std::size_t i);

// Concrete objects assembled from a validated config.
ScalarPotential scalar_potential_of(const PotentialConfig& pc);
VectorPotential vector_potential_of(const PotentialConfig& pc);
BoundaryMode boundary_mode_of(const RunConfig& cfg);
Formulation formulation_of(const RunConfig& cfg);
SolverConfig solver_config_of(const RunConfig& cfg);  // dt resolved later when auto

}  // namespace hch

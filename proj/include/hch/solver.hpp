#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "hch/banded.hpp"
#include "hch/boundary.hpp"
#include "hch/grid.hpp"
#include "hch/potential.hpp"

namespace hch {

enum class Formulation { SecondOrder, Flux, ClassicCH };

struct SolverConfig {
    double eps = 0.05;
    double tau = 1.0;
    double dt = 1e-3;
    double t_max = 1.0;
    Formulation formulation = Formulation::SecondOrder;
    BoundaryMode boundary;
    double safety = 0.2;  // select_dt factor
};

// Cached constant-coefficient implicit operator diag*I + biharm*D4 with the
// run's ghost closure, factored once and reused across steps.
struct ImplicitOperator {
    std::size_t n = 0;
    double dx = 0.0, diag = 0.0, biharm = 0.0;
    BoundaryKind kind = BoundaryKind::NeumannHomogeneous;
    BandedLU lu{1, 2, 2};
};

struct State {
    double t = 0.0;
    GridFunction u;
    // SecondOrder: u_t at the nodes. Flux: J at the n-1 interior faces
    // (boundary faces are identically 0). ClassicCH: unused (empty).
    GridFunction w;
    std::shared_ptr<const ImplicitOperator> cache;
};

State make_state(GridFunction u0, GridFunction u1, Formulation form);

// Extends u by 2 ghost nodes per side. Neumann: even reflection about the
// boundary node. Dirichlet: odd reflection about the pinned boundary value.
std::vector<double> apply_boundary_ghosts(const GridFunction& u, const BoundaryMode& mode);

State step_second_order(const State& s, const SolverConfig& cfg, const ScalarPotential& p);
State step_flux(const State& s, const SolverConfig& cfg, const ScalarPotential& p);
State step_classic_ch(const State& s, const SolverConfig& cfg, const ScalarPotential& p);

// Dispatch on cfg.formulation.
State step(const State& s, const SolverConfig& cfg, const ScalarPotential& p);

// dt = safety * min(tau, dx^2*sqrt(tau)/eps, eps*dx^2/max|W''| on [-1.5,1.5]);
// the tau-dependent candidates are skipped when tau = 0 (ClassicCH limit).
double select_dt(const SolverConfig& cfg, const GridFunction& grid, const ScalarPotential& p);

using Observer = std::function<void(const State&, std::size_t step)>;
using StopPredicate = std::function<bool(const State&, std::size_t step)>;

// Advances until t >= t_max or stop fires. Observers run at t=0, every
// output_stride steps, and at the final state; stop is checked at the same
// instants. Deterministic given identical inputs.
State run(State s, const SolverConfig& cfg, const ScalarPotential& p,
          const std::vector<Observer>& observers, const StopPredicate& stop = nullptr,
          std::size_t output_stride = 1);

// u_t as a node field: SecondOrder returns w, Flux returns -div J (half cells
// at the boundary nodes), ClassicCH evaluates the parabolic right-hand side.
GridFunction time_derivative(const State& s, const SolverConfig& cfg, const ScalarPotential& p);

// Building blocks shared with the vector solver (Neumann closure): the
// centered second difference with even reflection at the walls, and the
// factored implicit operator of the second-order step, reusable across
// components carrying identical coefficients.
GridFunction d2_neumann(const GridFunction& g);
std::shared_ptr<const ImplicitOperator> second_order_operator(
    const std::shared_ptr<const ImplicitOperator>& cache, std::size_t n, double dx,
    const SolverConfig& cfg);

}  // namespace hch

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "hch/diagnostics.hpp"
#include "hch/grid.hpp"
#include "hch/potential.hpp"
#include "hch/solver.hpp"

namespace hch {

// m-component state on one shared grid; one implicit factorization serves
// every component (the linear part is component-diagonal).
struct VectorState {
    double t = 0.0;
    std::vector<GridFunction> u;
    std::vector<GridFunction> w;  // u_t per component
    std::shared_ptr<const ImplicitOperator> cache;
};

// Piecewise-constant limit profile taking values in the zero set of a
// VectorPotential: plateau i carries zeros[labels[i]].
struct VectorStepProfile {
    double a = 0.0;
    double b = 1.0;
    std::vector<double> jumps;
    double r = 0.0;
    std::vector<std::size_t> labels;  // size jumps+1, adjacent entries differ

    std::size_t n_layers() const { return jumps.size(); }
    std::size_t plateau_label(double x) const;
};

// Piecewise-linear transition path between two zeros with its discrete cost
// J = sqrt(2) * sum over segments of |dz| * (sqrt(W) endpoint average).
struct PathCurve {
    std::vector<std::vector<double>> points;
    double j_value = 0.0;         // relaxed discrete J (upper bound of phi)
    double straight_value = 0.0;  // J of the straight segment initialization
    std::size_t iterations = 0;
};

VectorStepProfile build_vector_step(double a, double b, std::vector<double> jumps, double r,
                                    std::vector<std::size_t> labels, const VectorPotential& p);

// Geodesic transition cost: string-style relaxation over piecewise-linear
// paths (gradient descent on interior points with backtracking on J and
// equal-arclength reparameterization each sweep, straight-segment start).
// For m = 1 the path cannot detour, so the cost is evaluated by adaptive
// quadrature of sqrt(2 W) directly and the straight path is returned.
// Throws on persistent descent divergence, quoting the recent J values.
PathCurve geodesic_phi(const VectorPotential& p, const std::vector<double>& xi1,
                       const std::vector<double>& xi2, std::size_t n_points = 257,
                       std::size_t iters = 4000, double tol = 1e-10);

// Write-once phi cache keyed by (zero pair, point count, tolerance); safe for
// concurrent lookups. Pair order is normalized (phi is symmetric).
class PhiCache {
  public:
    const PathCurve& get(const VectorPotential& p, std::size_t i, std::size_t j,
                         std::size_t n_points = 257, std::size_t iters = 4000, double tol = 1e-10);

  private:
    std::map<std::tuple<std::size_t, std::size_t, std::size_t, double>, PathCurve> entries_;
    std::mutex mutex_;
};

// P0[v] = sum over jumps of phi(adjacent plateau zeros). Repeated pairs are
// served from the cache, so equal jumps contribute exactly equal terms.
double p0(const VectorStepProfile& v, const VectorPotential& p, PhiCache& cache);

VectorState make_vector_state(std::vector<GridFunction> u0, std::vector<GridFunction> u1);

// Componentwise IMEX step of tau u_tt + u_t = (-eps^2 u_xx + grad W(u))_xx
// under homogeneous Neumann conditions; matches the scalar second-order step
// exactly at m = 1.
VectorState vector_step(const VectorState& s, const SolverConfig& cfg, const VectorPotential& p);

using VectorObserver = std::function<void(const VectorState&, std::size_t step)>;
using VectorStopPredicate = std::function<bool(const VectorState&, std::size_t step)>;

// Same stepping/observer/stop contract as the scalar run (observers at step
// 0, every output_stride steps, and the final step; stop checked at the same
// instants).
VectorState vector_run(VectorState s, const SolverConfig& cfg, const VectorPotential& p,
                       const std::vector<VectorObserver>& observers = {},
                       const VectorStopPredicate& stop = nullptr, std::size_t output_stride = 1);

// integral of eps/2 |u_x|^2 + W(u)/eps with the scalar stencils applied
// componentwise (Euclidean |u_x|^2).
double vector_p_eps(const std::vector<GridFunction>& u, const VectorPotential& p, double eps);

// Energy report: kinetic from the componentwise Neumann primitives of w;
// mass carries the sum of componentwise masses.
EnergyReport vector_energy(const VectorState& s, const VectorPotential& p, double eps, double tau);

// As the scalar certificate with N*c0 replaced by P0[v]; the distance gate
// uses the componentwise Neumann primitive combined in Euclidean norm.
// Requires A in (0, r*sqrt(2*lambda0)).
LowerBoundCertificate vector_lower_bound_certificate(const std::vector<GridFunction>& u,
                                                     const VectorStepProfile& v,
                                                     const VectorPotential& p, double eps, double A,
                                                     PhiCache& cache, double delta = -1.0);

// Layer profile traversing each jump's geodesic path by normalized arclength
// on the scalar standing-wave schedule sigma(y) = (1 + tanh(y/sqrt(2)))/2,
// renormalized so the plateaus are met exactly at distance r from the jump.
std::vector<GridFunction> build_vector_layer_profile(const VectorStepProfile& v,
                                                     const VectorPotential& p, double eps,
                                                     std::size_t n, PhiCache& cache);

}  // namespace hch

#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hch/boundary.hpp"
#include "hch/grid.hpp"
#include "hch/potential.hpp"

namespace hch {

// Piecewise-constant limit profile v on [a,b] with jumps h_1 < ... < h_N,
// separation radius r, and v = left_value on (a, h_1).
struct StepProfile {
    double a = 0.0;
    double b = 1.0;
    std::vector<double> jumps;
    double r = 0.0;
    int left_value = -1;

    std::size_t n_layers() const { return jumps.size(); }
    // Value of v at x; at a jump the right plateau is taken.
    double value(double x) const;
    // Plateau value on the i-th plateau (0 = leftmost, N = rightmost).
    double plateau(std::size_t i) const;
};

struct LayerParameters {
    double eps = 0.0;
    double f_budget = 0.0;  // the excess budget 1/f(eps)
    double A = 0.0;         // decay rate, must lie in (0, r*sqrt(2*lambda))
};

struct BudgetReport {
    double value = 0.0;   // tau * ||primitive of u1||^2
    double budget = 0.0;  // eps * (f_budget + exp(-A/eps)), C = 1
    double ratio = 0.0;
    bool pass = true;
};

// Standing-wave profile: omega' = sqrt(2 W(omega)), omega(0) = 0. For the
// quartic the closed form tanh(x/sqrt(2)) is used; otherwise x(u) =
// int_0^u ds/sqrt(2W(s)) is tabulated on a graded mesh and inverted with a
// monotone Hermite interpolant (exact slopes sqrt(2W)), clamped to
// +-(1 - 1e-12) beyond the table.
class StandingWave {
  public:
    explicit StandingWave(const ScalarPotential& p);
    double operator()(double x) const;

  private:
    bool quartic_;
    std::vector<double> xs_, us_, slopes_;
};

double standing_wave(const ScalarPotential& p, double x);

StepProfile build_step(double a, double b, std::vector<double> jumps, double r, int left_value);

// Samples v at n uniform nodes (right plateau taken at a jump node).
GridFunction sample_step(const StepProfile& v, std::size_t n);

// N-transition-layer profile: equals v outside the (h_i - r, h_i + r)
// intervals, the oriented standing wave in each core, and linear blending on
// the outer eps-collars. Requires eps < r and dx <= eps/4.
GridFunction build_layer_profile(const StepProfile& v, const ScalarPotential& p, double eps,
                                 std::size_t n);

// Dirichlet primitive: cumulative integral minus the mean of the cumulative;
// result has zero mean.
GridFunction primitive_bar(const GridFunction& u);

// Neumann primitive: cumulative integral with value 0 at a and the discrete
// mass at b.
GridFunction primitive_tilde(const GridFunction& u);

GridFunction project_zero_mean(const GridFunction& u1);

// Compares tau * ||primitive of u1||^2 (bar in Dirichlet mode, tilde in
// Neumann mode) against the budget eps * (1/f(eps) + exp(-A/eps)).
BudgetReport velocity_budget_check(const GridFunction& u1, const LayerParameters& params,
                                   double tau, const BoundaryMode& mode);

// Throws unless 0 < A < r*sqrt(2*lambda) and 0 < eps < r.
void validate_layer_parameters(const LayerParameters& params, const ScalarPotential& p, double r);

// Zero-mean seeded velocity: superposition of full-period sine modes with
// coefficients drawn from a splitmix/mt19937 stream, rescaled so that
// max|u1| = amplitude. Vanishes at both boundaries.
GridFunction make_noise_velocity(double a, double b, std::size_t n, double amplitude,
                                 std::uint64_t seed);

}  // namespace hch

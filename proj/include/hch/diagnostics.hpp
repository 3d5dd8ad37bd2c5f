#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "hch/boundary.hpp"
#include "hch/grid.hpp"
#include "hch/potential.hpp"
#include "hch/profiles.hpp"

namespace hch {

// One diagnostics row. e_eps = p_eps + kinetic by construction; rate_sq
// carries ||primitive velocity||^2 so the running dissipation integral stays
// available when tau = 0 (kinetic vanishes there but the integrand does not).
struct EnergyReport {
    double t = 0.0;
    double p_eps = 0.0;
    double kinetic = 0.0;
    double e_eps = 0.0;
    double mass = 0.0;
    double diss_cum = 0.0;
    double rate_sq = 0.0;
};

enum class CertificateVerdict { Pass, Fail, DistanceExceeded };

const char* to_string(CertificateVerdict v);

// Variational floor check: excess = P_eps[u] - N*c0 against -exp(-A/eps)
// (prefactor 1), gated by the primitive L1 distance to the step profile.
struct LowerBoundCertificate {
    std::size_t n_layers = 0;
    double c0 = 0.0;
    double A = 0.0;
    double l1_distance = 0.0;
    double excess = 0.0;
    double floor = 0.0;
    double delta = 0.0;  // the L1 gate actually applied
    CertificateVerdict verdict = CertificateVerdict::Pass;
};

struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // rms residual of the log fit
};

// integral of eps/2 u_x^2 + W(u)/eps; u_x by central differences, one-sided
// at the boundary nodes, trapezoid quadrature.
double p_eps(const GridFunction& u, const ScalarPotential& p, double eps);

// Full report at one instant. velocity_primitive is the boundary-appropriate
// primitive of u_t (bar for Dirichlet, tilde for Neumann). t and diss_cum are
// run bookkeeping and are left for the caller.
EnergyReport e_eps(const GridFunction& u, const GridFunction& velocity_primitive,
                   const ScalarPotential& p, double eps, double tau);

// Time-trapezoid increment of eps^{-1} ||primitive velocity||^2 between two
// consecutive reports.
double dissipation_increment(const EnergyReport& prev, const EnergyReport& next, double eps);

// m(t) = m0 + tau*m0prime*(1 - exp(-t/tau)); requires tau > 0.
double mass_closed_form(double t, double m0, double m0prime, double tau);

// |E(0) - E(T) - diss_cum(T)| / max(E(0), 1e-300); requires >= 2 reports.
double dissipation_identity_residual(const std::vector<EnergyReport>& series);

// delta <= 0 selects the default gate r/4 * (well gap).
LowerBoundCertificate lower_bound_certificate(const GridFunction& u, const StepProfile& v,
                                              const ScalarPotential& p, double eps, double A,
                                              const BoundaryMode& mode, double delta = -1.0);

// Least squares of log(excess) against 1/eps; slope estimates -A. Requires
// >= 3 pairs, every excess positive.
DecayFit excess_decay_fit(const std::vector<std::pair<double, double>>& pairs);

}  // namespace hch

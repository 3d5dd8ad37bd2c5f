#include "hch/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hch {

const char* to_string(CertificateVerdict v) {
    switch (v) {
        case CertificateVerdict::Pass: return "pass";
        case CertificateVerdict::Fail: return "fail";
        case CertificateVerdict::DistanceExceeded: return "distance exceeded";
    }
    return "unknown";
}

double p_eps(const GridFunction& u, const ScalarPotential& p, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("p_eps: eps must be positive");
    const std::size_t n = u.n();
    const double dx = u.dx();
    GridFunction density(u.a, u.b, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        double ux;
        if (i == 0)
            ux = (u.values[1] - u.values[0]) / dx;
        else if (i == n - 1)
            ux = (u.values[n - 1] - u.values[n - 2]) / dx;
        else
            ux = (u.values[i + 1] - u.values[i - 1]) / (2.0 * dx);
        density.values[i] = 0.5 * eps * ux * ux + p.eval(u.values[i]) / eps;
    }
    return trapezoid(density);
}

EnergyReport e_eps(const GridFunction& u, const GridFunction& velocity_primitive,
                   const ScalarPotential& p, double eps, double tau) {
    EnergyReport rep;
    rep.p_eps = p_eps(u, p, eps);
    rep.rate_sq = l2_norm_sq(velocity_primitive);
    rep.kinetic = tau / (2.0 * eps) * rep.rate_sq;
    rep.e_eps = rep.p_eps + rep.kinetic;
    rep.mass = trapezoid(u);
    return rep;
}

double dissipation_increment(const EnergyReport& prev, const EnergyReport& next, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("dissipation_increment: eps must be positive");
    return 0.5 * (next.t - prev.t) * (prev.rate_sq + next.rate_sq) / eps;
}

double mass_closed_form(double t, double m0, double m0prime, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("mass_closed_form: tau must be positive");
    return m0 + tau * m0prime * (1.0 - std::exp(-t / tau));
}

double dissipation_identity_residual(const std::vector<EnergyReport>& series) {
    if (series.size() < 2)
        throw std::invalid_argument("dissipation_identity_residual: need at least 2 reports");
    const double e0 = series.front().e_eps;
    const double eT = series.back().e_eps;
    const double diss = series.back().diss_cum;
    return std::abs(e0 - eT - diss) / std::max(e0, 1e-300);
}

LowerBoundCertificate lower_bound_certificate(const GridFunction& u, const StepProfile& v,
                                              const ScalarPotential& p, double eps, double A,
                                              const BoundaryMode& mode, double delta) {
    LowerBoundCertificate cert;
    cert.n_layers = v.n_layers();
    cert.c0 = c0(p);
    cert.A = A;
    cert.delta = delta > 0.0 ? delta : v.r * (p.wells[1] - p.wells[0]) / 4.0;

    GridFunction diff = u;
    for (std::size_t i = 0; i < u.n(); ++i) diff.values[i] = u.values[i] - v.value(u.x(i));
    const GridFunction prim = mode.kind == BoundaryKind::DirichletWells ? primitive_bar(diff)
                                                                        : primitive_tilde(diff);
    cert.l1_distance = l1_norm(prim);
    cert.excess = p_eps(u, p, eps) - static_cast<double>(cert.n_layers) * cert.c0;
    cert.floor = -std::exp(-A / eps);
    if (cert.l1_distance > cert.delta)
        cert.verdict = CertificateVerdict::DistanceExceeded;
    else
        cert.verdict = cert.excess >= cert.floor ? CertificateVerdict::Pass
                                                 : CertificateVerdict::Fail;
    return cert;
}

DecayFit excess_decay_fit(const std::vector<std::pair<double, double>>& pairs) {
    if (pairs.size() < 3)
        throw std::invalid_argument("excess_decay_fit: need at least 3 pairs");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [eps, excess] : pairs) {
        if (!(excess > 0.0))
            throw std::invalid_argument("excess_decay_fit: non-positive excess at eps = " +
                                        std::to_string(eps));
        if (!(eps > 0.0))
            throw std::invalid_argument("excess_decay_fit: eps must be positive");
        const double x = 1.0 / eps, y = std::log(excess);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double m = static_cast<double>(pairs.size());
    const double det = m * sxx - sx * sx;
    if (det == 0.0) throw std::invalid_argument("excess_decay_fit: degenerate eps values");
    DecayFit fit;
    fit.slope = (m * sxy - sx * sy) / det;
    fit.intercept = (sxx * sy - sx * sxy) / det;
    double rss = 0.0;
    for (const auto& [eps, excess] : pairs) {
        const double r = std::log(excess) - (fit.intercept + fit.slope / eps);
        rss += r * r;
    }
    fit.residual = std::sqrt(rss / m);
    return fit;
}

}  // namespace hch

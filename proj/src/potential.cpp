#include "hch/potential.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hch/quad.hpp"

namespace hch {

namespace {

std::vector<double> differentiate(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
    if (d.empty()) d.push_back(0.0);
    return d;
}

double horner(const std::vector<double>& c, double u) {
    double s = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * u + c[k];
    return s;
}

void track_worst(ValidationReport& rep, const std::string& what, double where, double magnitude) {
    rep.pass = false;
    if (magnitude > rep.violation) {
        rep.message = what;
        rep.location = where;
        rep.violation = magnitude;
    }
}

}  // namespace

ScalarPotential make_quartic() {
    ScalarPotential p;
    p.eval = [](double u) {
        const double q = u * u - 1.0;
        return 0.25 * q * q;
    };
    p.deriv = [](double u) { return u * u * u - u; };
    p.deriv2 = [](double u) { return 3.0 * u * u - 1.0; };
    p.wells = {-1.0, 1.0};
    p.quartic = true;
    return p;
}

ScalarPotential make_polynomial(const std::vector<double>& coeffs, std::array<double, 2> wells) {
    if (coeffs.empty()) throw std::invalid_argument("make_polynomial: empty coefficient list");
    if (wells[0] == wells[1]) throw std::invalid_argument("make_polynomial: wells must be distinct");
    if (wells[0] > wells[1]) std::swap(wells[0], wells[1]);
    const auto d1 = differentiate(coeffs);
    const auto d2 = differentiate(d1);
    ScalarPotential p;
    p.eval = [coeffs](double u) { return horner(coeffs, u); };
    p.deriv = [d1](double u) { return horner(d1, u); };
    p.deriv2 = [d2](double u) { return horner(d2, u); };
    p.wells = wells;
    return p;
}

ValidationReport validate(const ScalarPotential& p, std::size_t samples) {
    ValidationReport rep;
    if (samples < 10) {
        track_worst(rep, "samples must be >= 10", 0.0, 1.0);
        return rep;
    }
    for (double w : p.wells) {
        const double v0 = p.eval(w);
        if (std::abs(v0) > 1e-12) track_worst(rep, "W(well)!=0", w, std::abs(v0));
        const double v1 = p.deriv(w);
        if (std::abs(v1) > 1e-12) track_worst(rep, "W'(well)!=0", w, std::abs(v1));
        const double v2 = p.deriv2(w);
        if (!(v2 > 0.0)) track_worst(rep, "W''(well)<=0", w, 1.0 - v2);
    }
    const double lo = std::min(p.wells[0], p.wells[1]) - 1.0;
    const double hi = std::max(p.wells[0], p.wells[1]) + 1.0;
    const double h = (hi - lo) / static_cast<double>(samples - 1);
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = lo + h * static_cast<double>(i);
        const double dwell =
            std::min(std::abs(u - p.wells[0]), std::abs(u - p.wells[1]));
        if (dwell <= h) continue;  // well neighborhoods are checked above
        const double v = p.eval(u);
        if (!(v > 0.0)) track_worst(rep, "W<0 off wells", u, std::abs(v) + 1e-300);
    }
    return rep;
}

double c0(const ScalarPotential& p, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("c0: tol must be positive");
    const auto f = [&p](double s) { return std::sqrt(std::max(0.0, 2.0 * p.eval(s))); };
    return adaptive_simpson(f, p.wells[0], p.wells[1], tol);
}

StiffnessConstants stiffness(const ScalarPotential& p, double r) {
    StiffnessConstants s;
    s.lambda = std::min(p.deriv2(p.wells[0]), p.deriv2(p.wells[1]));
    if (!(s.lambda > 0.0)) throw std::runtime_error("stiffness: W'' at a well is not positive");
    s.rate_cap = r > 0.0 ? r * std::sqrt(2.0 * s.lambda) : 0.0;
    return s;
}

VectorPotential embed_scalar(const ScalarPotential& p) {
    VectorPotential vp;
    vp.m = 1;
    vp.eval = [p](const std::vector<double>& u) { return p.eval(u[0]); };
    vp.grad = [p](const std::vector<double>& u) { return std::vector<double>{p.deriv(u[0])}; };
    vp.hess = [p](const std::vector<double>& u) { return std::vector<double>{p.deriv2(u[0])}; };
    vp.zeros = {{p.wells[0]}, {p.wells[1]}};
    vp.lambda0 = min_hessian_eigenvalue(vp);
    return vp;
}

namespace {

// Cartesian product of per-component well pairs, in lexicographic order.
std::vector<std::vector<double>> well_product(const std::vector<std::array<double, 2>>& wells) {
    std::vector<std::vector<double>> out(1);
    for (const auto& w : wells) {
        std::vector<std::vector<double>> next;
        for (const auto& partial : out)
            for (double v : {w[0], w[1]}) {
                auto z = partial;
                z.push_back(v);
                next.push_back(std::move(z));
            }
        out = std::move(next);
    }
    return out;
}

VectorPotential sum_of_scalars(std::vector<ScalarPotential> comps) {
    const std::size_t m = comps.size();
    VectorPotential vp;
    vp.m = m;
    vp.eval = [comps](const std::vector<double>& u) {
        double s = 0.0;
        for (std::size_t j = 0; j < comps.size(); ++j) s += comps[j].eval(u[j]);
        return s;
    };
    vp.grad = [comps](const std::vector<double>& u) {
        std::vector<double> g(comps.size());
        for (std::size_t j = 0; j < comps.size(); ++j) g[j] = comps[j].deriv(u[j]);
        return g;
    };
    vp.hess = [comps, m](const std::vector<double>& u) {
        std::vector<double> h(m * m, 0.0);
        for (std::size_t j = 0; j < m; ++j) h[j * m + j] = comps[j].deriv2(u[j]);
        return h;
    };
    std::vector<std::array<double, 2>> wells;
    for (const auto& c : comps) wells.push_back(c.wells);
    vp.zeros = well_product(wells);
    vp.lambda0 = min_hessian_eigenvalue(vp);
    return vp;
}

}  // namespace

VectorPotential make_decoupled_quartic(std::size_t m) {
    if (m == 0) throw std::invalid_argument("make_decoupled_quartic: m must be >= 1");
    return sum_of_scalars(std::vector<ScalarPotential>(m, make_quartic()));
}

VectorPotential make_polynomial_sum(const std::vector<std::vector<double>>& coeffs,
                                    const std::vector<std::array<double, 2>>& wells) {
    if (coeffs.empty() || coeffs.size() != wells.size())
        throw std::invalid_argument("make_polynomial_sum: coefficient/well list mismatch");
    std::vector<ScalarPotential> comps;
    for (std::size_t j = 0; j < coeffs.size(); ++j)
        comps.push_back(make_polynomial(coeffs[j], wells[j]));
    return sum_of_scalars(std::move(comps));
}

ValidationReport validate(const VectorPotential& p, std::size_t samples) {
    ValidationReport rep;
    if (p.m == 0 || p.zeros.empty()) {
        track_worst(rep, "no zeros declared", 0.0, 1.0);
        return rep;
    }
    for (const auto& z : p.zeros) {
        if (z.size() != p.m) {
            track_worst(rep, "zero of wrong dimension", 0.0, 1.0);
            return rep;
        }
        const double v0 = p.eval(z);
        if (std::abs(v0) > 1e-12) track_worst(rep, "W(zero)!=0", z[0], std::abs(v0));
        const auto g = p.grad(z);
        for (double gj : g)
            if (std::abs(gj) > 1e-12) track_worst(rep, "grad(zero)!=0", z[0], std::abs(gj));
    }
    // Positive definiteness at the zeros via the eigen solve; a throw here
    // means a malformed Hessian, reported rather than propagated.
    try {
        const double l0 = min_hessian_eigenvalue(p);
        if (!(l0 > 0.0)) track_worst(rep, "Hessian not positive definite at a zero", 0.0, 1.0 - l0);
    } catch (const std::exception& e) {
        track_worst(rep, e.what(), 0.0, 1.0);
    }
    // Sample positivity along segments between zero pairs (off the endpoints).
    for (std::size_t i = 0; i < p.zeros.size(); ++i)
        for (std::size_t j = i + 1; j < p.zeros.size(); ++j)
            for (std::size_t k = 1; k + 1 < samples; ++k) {
                const double t = static_cast<double>(k) / static_cast<double>(samples - 1);
                std::vector<double> u(p.m);
                for (std::size_t c = 0; c < p.m; ++c)
                    u[c] = (1.0 - t) * p.zeros[i][c] + t * p.zeros[j][c];
                bool at_zero = false;
                for (const auto& z : p.zeros) {
                    double d = 0.0;
                    for (std::size_t c = 0; c < p.m; ++c) d += (u[c] - z[c]) * (u[c] - z[c]);
                    if (std::sqrt(d) < 1e-6) at_zero = true;
                }
                if (at_zero) continue;
                const double v = p.eval(u);
                if (!(v > 0.0)) track_worst(rep, "W<=0 off zeros", u[0], std::abs(v) + 1e-300);
            }
    return rep;
}

double min_hessian_eigenvalue(const VectorPotential& p) {
    const std::size_t m = p.m;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& z : p.zeros) {
        const auto h = p.hess(z);
        if (h.size() != m * m)
            throw std::runtime_error("min_hessian_eigenvalue: Hessian size mismatch");
        double scale = 0.0;
        for (double v : h) scale = std::max(scale, std::abs(v));
        Eigen::MatrixXd H(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const double hij = h[i * m + j], hji = h[j * m + i];
                if (std::abs(hij - hji) > 1e-10 * std::max(1.0, scale))
                    throw std::runtime_error("min_hessian_eigenvalue: non-symmetric Hessian at a zero");
                H(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = hij;
            }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("min_hessian_eigenvalue: eigen solve failed");
        best = std::min(best, es.eigenvalues().minCoeff());
    }
    return best;
}

}  // namespace hch

#include "hch/vector_systems.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include "hch/profiles.hpp"
#include "hch/quad.hpp"

namespace hch {

namespace {

void require_components(const std::vector<GridFunction>& u, const VectorPotential& p,
                        const char* who) {
    if (u.empty()) throw std::invalid_argument(std::string(who) + ": empty component list");
    if (u.size() != p.m)
        throw std::invalid_argument(std::string(who) + ": component count " +
                                    std::to_string(u.size()) + " does not match potential m=" +
                                    std::to_string(p.m));
    for (std::size_t c = 1; c < u.size(); ++c) require_same_grid(u[0], u[c]);
}

double sqrt_w(const VectorPotential& p, const std::vector<double>& z) {
    return std::sqrt(std::max(0.0, p.eval(z)));
}

double segment_length(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) s += (b[c] - a[c]) * (b[c] - a[c]);
    return std::sqrt(s);
}

// J = sqrt(2) * sum over segments of |dz| * (sqrt(W) endpoint average).
double discrete_j(const VectorPotential& p, const std::vector<std::vector<double>>& pts) {
    double j = 0.0;
    double sw_prev = sqrt_w(p, pts.front());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
        const double sw_next = sqrt_w(p, pts[k + 1]);
        j += segment_length(pts[k], pts[k + 1]) * 0.5 * (sw_prev + sw_next);
        sw_prev = sw_next;
    }
    return std::sqrt(2.0) * j;
}

// Resamples the polyline at equal arclength, endpoints pinned.
void reparameterize(std::vector<std::vector<double>>& pts) {
    const std::size_t np = pts.size();
    std::vector<double> s(np, 0.0);
    for (std::size_t k = 1; k < np; ++k) s[k] = s[k - 1] + segment_length(pts[k - 1], pts[k]);
    const double total = s.back();
    if (!(total > 0.0)) return;
    std::vector<std::vector<double>> out(np, pts.front());
    std::size_t seg = 0;
    for (std::size_t k = 1; k + 1 < np; ++k) {
        const double target = total * static_cast<double>(k) / static_cast<double>(np - 1);
        while (seg + 2 < np && s[seg + 1] < target) ++seg;
        const double len = s[seg + 1] - s[seg];
        const double f = len > 0.0 ? (target - s[seg]) / len : 0.0;
        for (std::size_t c = 0; c < pts[seg].size(); ++c)
            out[k][c] = pts[seg][c] + f * (pts[seg + 1][c] - pts[seg][c]);
    }
    out.back() = pts.back();
    pts = std::move(out);
}

std::vector<std::vector<double>> straight_path(const std::vector<double>& xi1,
                                               const std::vector<double>& xi2, std::size_t np) {
    std::vector<std::vector<double>> pts(np, xi1);
    for (std::size_t k = 0; k < np; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(np - 1);
        for (std::size_t c = 0; c < xi1.size(); ++c) pts[k][c] = xi1[c] + f * (xi2[c] - xi1[c]);
    }
    return pts;
}

// dJ/dz_k for an interior point: segment-length terms plus the sqrt(W)
// sensitivity, guarded where W vanishes.
std::vector<std::vector<double>> j_gradient(const VectorPotential& p,
                                            const std::vector<std::vector<double>>& pts) {
    const std::size_t np = pts.size();
    const std::size_t m = pts.front().size();
    std::vector<double> sw(np);
    for (std::size_t k = 0; k < np; ++k) sw[k] = sqrt_w(p, pts[k]);
    std::vector<std::vector<double>> grad(np, std::vector<double>(m, 0.0));
    for (std::size_t k = 1; k + 1 < np; ++k) {
        const double len_prev = segment_length(pts[k - 1], pts[k]);
        const double len_next = segment_length(pts[k], pts[k + 1]);
        const auto gw = p.grad(pts[k]);
        const double inv_sw = sw[k] > 1e-150 ? 0.5 / sw[k] : 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            double g = 0.0;
            if (len_prev > 0.0)
                g += (pts[k][c] - pts[k - 1][c]) / len_prev * 0.5 * (sw[k - 1] + sw[k]);
            if (len_next > 0.0)
                g -= (pts[k + 1][c] - pts[k][c]) / len_next * 0.5 * (sw[k] + sw[k + 1]);
            g += 0.5 * (len_prev + len_next) * gw[c] * inv_sw;
            grad[k][c] = std::sqrt(2.0) * g;
        }
    }
    return grad;
}

GridFunction zero_like(const GridFunction& g) {
    return GridFunction(g.a, g.b, std::vector<double>(g.n(), 0.0));
}

void guard_finite(const std::vector<double>& v, const char* field, std::size_t component) {
    for (double x : v)
        if (!std::isfinite(x))
            throw std::runtime_error(std::string("vector_step: non-finite value in ") + field +
                                     " (component " + std::to_string(component + 1) + ")");
}

// Piecewise-linear point on the path at normalized arclength s in [0,1].
std::vector<double> path_point(const std::vector<std::vector<double>>& pts,
                               const std::vector<double>& cum, double s) {
    if (s <= 0.0) return pts.front();
    if (s >= 1.0) return pts.back();
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const std::size_t hi = std::min<std::size_t>(it - cum.begin(), cum.size() - 1);
    const std::size_t lo = hi - 1;
    const double len = cum[hi] - cum[lo];
    const double f = len > 0.0 ? (s - cum[lo]) / len : 0.0;
    std::vector<double> z(pts[lo].size());
    for (std::size_t c = 0; c < z.size(); ++c)
        z[c] = pts[lo][c] + f * (pts[hi][c] - pts[lo][c]);
    return z;
}

std::vector<double> cumulative_fraction(const std::vector<std::vector<double>>& pts) {
    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t k = 1; k < pts.size(); ++k)
        cum[k] = cum[k - 1] + segment_length(pts[k - 1], pts[k]);
    const double total = cum.back();
    if (total > 0.0)
        for (double& s : cum) s /= total;
    return cum;
}

}  // namespace

std::size_t VectorStepProfile::plateau_label(double x) const {
    std::size_t i = 0;
    while (i < jumps.size() && x >= jumps[i]) ++i;
    return labels[i];
}

VectorStepProfile build_vector_step(double a, double b, std::vector<double> jumps, double r,
                                    std::vector<std::size_t> labels, const VectorPotential& p) {
    if (!(a < b)) throw std::invalid_argument("build_vector_step: requires a < b");
    if (!(r > 0.0)) throw std::invalid_argument("build_vector_step: radius must be positive");
    if (labels.size() != jumps.size() + 1)
        throw std::invalid_argument("build_vector_step: need one plateau label per plateau (" +
                                    std::to_string(jumps.size() + 1) + "), got " +
                                    std::to_string(labels.size()));
    for (std::size_t l : labels)
        if (l >= p.zeros.size())
            throw std::invalid_argument("build_vector_step: plateau label " + std::to_string(l) +
                                        " exceeds the zero count " +
                                        std::to_string(p.zeros.size()));
    for (std::size_t i = 1; i < labels.size(); ++i)
        if (labels[i] == labels[i - 1])
            throw std::invalid_argument("build_vector_step: adjacent plateau labels equal at jump " +
                                        std::to_string(i));
    const double slack = 1e-12 * (b - a);
    for (std::size_t i = 1; i < jumps.size(); ++i) {
        if (!(jumps[i] > jumps[i - 1]))
            throw std::invalid_argument("build_vector_step: jumps not strictly increasing");
        if (jumps[i] - jumps[i - 1] < 2.0 * r - slack)
            throw std::invalid_argument("build_vector_step: separation violated between jumps " +
                                        std::to_string(i) + " and " + std::to_string(i + 1));
    }
    if (!jumps.empty() && (jumps.front() - r < a - slack || jumps.back() + r > b + slack))
        throw std::invalid_argument("build_vector_step: jump too close to boundary");
    VectorStepProfile v;
    v.a = a;
    v.b = b;
    v.jumps = std::move(jumps);
    v.r = r;
    v.labels = std::move(labels);
    return v;
}

PathCurve geodesic_phi(const VectorPotential& p, const std::vector<double>& xi1,
                       const std::vector<double>& xi2, std::size_t n_points, std::size_t iters,
                       double tol) {
    if (xi1.size() != p.m || xi2.size() != p.m)
        throw std::invalid_argument("geodesic_phi: endpoint dimension does not match potential m");
    if (n_points < 8) throw std::invalid_argument("geodesic_phi: need at least 8 points");
    if (!(tol > 0.0)) throw std::invalid_argument("geodesic_phi: tol must be positive");

    PathCurve out;
    if (segment_length(xi1, xi2) == 0.0) {
        // Zero-length curve: phi(z, z) = 0.
        out.points = {xi1};
        return out;
    }

    if (p.m == 1) {
        // A 1D path cannot detour, so phi is the exact line integral; both
        // reported values are the quadrature result.
        const double lo = std::min(xi1[0], xi2[0]);
        const double hi = std::max(xi1[0], xi2[0]);
        const double j = adaptive_simpson(
            [&p](double s) { return std::sqrt(std::max(0.0, 2.0 * p.eval({s}))); }, lo, hi, 1e-12);
        out.points = straight_path(xi1, xi2, n_points);
        out.j_value = j;
        out.straight_value = j;
        return out;
    }

    auto pts = straight_path(xi1, xi2, n_points);
    double j = discrete_j(p, pts);
    out.straight_value = j;

    double step_size = 0.1 * segment_length(xi1, xi2) / static_cast<double>(n_points);
    std::size_t flat_sweeps = 0;
    std::size_t bad_sweeps = 0;
    std::vector<double> trace{j};

    std::size_t it = 0;
    for (; it < iters; ++it) {
        const auto grad = j_gradient(p, pts);
        double gnorm_sq = 0.0;
        for (const auto& g : grad)
            for (double x : g) gnorm_sq += x * x;

        bool accepted = false;
        double j_new = j;
        auto candidate = pts;
        for (int bt = 0; bt < 40; ++bt) {
            candidate = pts;
            for (std::size_t k = 1; k + 1 < candidate.size(); ++k)
                for (std::size_t c = 0; c < candidate[k].size(); ++c)
                    candidate[k][c] -= step_size * grad[k][c];
            reparameterize(candidate);
            j_new = discrete_j(p, candidate);
            if (j_new <= j - 1e-4 * step_size * gnorm_sq) {
                accepted = true;
                break;
            }
            step_size *= 0.5;
        }

        if (accepted) {
            const double drop = j - j_new;
            pts = std::move(candidate);
            j = j_new;
            step_size *= 1.5;
            bad_sweeps = 0;
            flat_sweeps = drop <= tol * std::max(1.0, std::abs(j)) ? flat_sweeps + 1 : 0;
            if (flat_sweeps >= 3) {
                ++it;
                break;
            }
        } else if (j_new <= j + 10.0 * tol * std::max(1.0, std::abs(j))) {
            // No descent direction left at roundoff scale: converged.
            ++it;
            break;
        } else {
            trace.push_back(j_new);
            if (++bad_sweeps >= 3) {
                std::ostringstream msg;
                msg << "geodesic_phi: descent diverged; J trace:";
                for (double v : trace) msg << " " << v;
                throw std::runtime_error(msg.str());
            }
        }
    }

    out.points = std::move(pts);
    out.j_value = j;
    out.iterations = it;
    return out;
}

const PathCurve& PhiCache::get(const VectorPotential& p, std::size_t i, std::size_t j,
                               std::size_t n_points, std::size_t iters, double tol) {
    if (i >= p.zeros.size() || j >= p.zeros.size())
        throw std::invalid_argument("PhiCache: zero index out of range");
    const auto key = std::make_tuple(std::min(i, j), std::max(i, j), n_points, tol);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        PathCurve curve =
            geodesic_phi(p, p.zeros[std::min(i, j)], p.zeros[std::max(i, j)], n_points, iters, tol);
        it = entries_.emplace(key, std::move(curve)).first;
    }
    return it->second;
}

double p0(const VectorStepProfile& v, const VectorPotential& p, PhiCache& cache) {
    double total = 0.0;
    for (std::size_t i = 0; i < v.n_layers(); ++i)
        total += cache.get(p, v.labels[i], v.labels[i + 1]).j_value;
    return total;
}

VectorState make_vector_state(std::vector<GridFunction> u0, std::vector<GridFunction> u1) {
    if (u0.size() != u1.size())
        throw std::invalid_argument("make_vector_state: u0/u1 component counts differ");
    if (u0.empty()) throw std::invalid_argument("make_vector_state: empty component list");
    for (std::size_t c = 0; c < u0.size(); ++c) {
        require_same_grid(u0[0], u0[c]);
        require_same_grid(u0[0], u1[c]);
    }
    VectorState s;
    s.u = std::move(u0);
    s.w = std::move(u1);
    return s;
}

VectorState vector_step(const VectorState& s, const SolverConfig& cfg, const VectorPotential& p) {
    if (cfg.boundary.kind != BoundaryKind::NeumannHomogeneous)
        throw std::invalid_argument(
            "vector_step: only homogeneous Neumann conditions are supported");
    require_components(s.u, p, "vector_step");
    if (s.w.size() != s.u.size())
        throw std::invalid_argument("vector_step: velocity component count mismatch");
    const std::size_t m = s.u.size();
    const std::size_t n = s.u[0].n();
    const double dx = s.u[0].dx();
    const double r = cfg.tau / cfg.dt;
    const double e2 = cfg.eps * cfg.eps;

    auto cache = second_order_operator(s.cache, n, dx, cfg);

    // grad W sampled jointly per node, split back into component fields.
    std::vector<GridFunction> g(m, zero_like(s.u[0]));
    std::vector<double> z(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < m; ++c) z[c] = s.u[c].values[i];
        const auto gr = p.grad(z);
        for (std::size_t c = 0; c < m; ++c) g[c].values[i] = gr[c];
    }

    VectorState out;
    out.t = s.t + cfg.dt;
    out.u = s.u;
    out.w = s.w;
    for (std::size_t c = 0; c < m; ++c) {
        const GridFunction d4u = d2_neumann(d2_neumann(s.u[c]));
        const GridFunction d2g = d2_neumann(g[c]);
        std::vector<double> rhs(n);
        for (std::size_t i = 0; i < n; ++i)
            rhs[i] = r * s.w[c].values[i] - e2 * d4u.values[i] + d2g.values[i];
        cache->lu.solve(rhs);
        guard_finite(rhs, "u_t", c);
        for (std::size_t i = 0; i < n; ++i)
            out.u[c].values[i] = s.u[c].values[i] + cfg.dt * rhs[i];
        guard_finite(out.u[c].values, "u", c);
        out.w[c].values = std::move(rhs);
    }
    out.cache = std::move(cache);
    return out;
}

VectorState vector_run(VectorState s, const SolverConfig& cfg, const VectorPotential& p,
                       const std::vector<VectorObserver>& observers,
                       const VectorStopPredicate& stop, std::size_t output_stride) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("vector_run: dt must be positive");
    const std::size_t stride = std::max<std::size_t>(1, output_stride);
    for (const auto& ob : observers) ob(s, 0);
    if (stop && stop(s, 0)) return s;
    const double t0 = s.t;
    if (cfg.t_max <= t0) return s;
    const auto nsteps = static_cast<std::size_t>(std::ceil((cfg.t_max - t0) / cfg.dt - 1e-9));
    for (std::size_t k = 1; k <= nsteps; ++k) {
        try {
            s = vector_step(s, cfg, p);
        } catch (const std::exception& e) {
            throw std::runtime_error("vector_run: step " + std::to_string(k) + " at t=" +
                                     std::to_string(t0 + cfg.dt * static_cast<double>(k)) + ": " +
                                     e.what());
        }
        s.t = t0 + cfg.dt * static_cast<double>(k);
        if (k % stride == 0 || k == nsteps) {
            for (const auto& ob : observers) ob(s, k);
            if (stop && stop(s, k)) break;
        }
    }
    return s;
}

double vector_p_eps(const std::vector<GridFunction>& u, const VectorPotential& p, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("vector_p_eps: eps must be positive");
    require_components(u, p, "vector_p_eps");
    const std::size_t m = u.size();
    const std::size_t n = u[0].n();
    const double dx = u[0].dx();
    GridFunction density(u[0].a, u[0].b, std::vector<double>(n, 0.0));
    std::vector<double> z(m);
    for (std::size_t i = 0; i < n; ++i) {
        double grad_sq = 0.0;
        for (std::size_t c = 0; c < m; ++c) {
            double ux;
            if (i == 0)
                ux = (u[c].values[1] - u[c].values[0]) / dx;
            else if (i == n - 1)
                ux = (u[c].values[n - 1] - u[c].values[n - 2]) / dx;
            else
                ux = (u[c].values[i + 1] - u[c].values[i - 1]) / (2.0 * dx);
            grad_sq += ux * ux;
            z[c] = u[c].values[i];
        }
        density.values[i] = 0.5 * eps * grad_sq + p.eval(z) / eps;
    }
    return trapezoid(density);
}

EnergyReport vector_energy(const VectorState& s, const VectorPotential& p, double eps,
                           double tau) {
    require_components(s.u, p, "vector_energy");
    EnergyReport rep;
    rep.t = s.t;
    rep.p_eps = vector_p_eps(s.u, p, eps);
    for (std::size_t c = 0; c < s.u.size(); ++c) {
        rep.rate_sq += l2_norm_sq(primitive_tilde(s.w[c]));
        rep.mass += trapezoid(s.u[c]);
    }
    rep.kinetic = tau / (2.0 * eps) * rep.rate_sq;
    rep.e_eps = rep.p_eps + rep.kinetic;
    return rep;
}

LowerBoundCertificate vector_lower_bound_certificate(const std::vector<GridFunction>& u,
                                                     const VectorStepProfile& v,
                                                     const VectorPotential& p, double eps, double A,
                                                     PhiCache& cache, double delta) {
    require_components(u, p, "vector_lower_bound_certificate");
    const double cap = v.r * std::sqrt(2.0 * p.lambda0);
    if (!(A > 0.0) || !(A < cap))
        throw std::invalid_argument(
            "vector_lower_bound_certificate: A must lie in (0, r*sqrt(2*lambda0)) = (0, " +
            std::to_string(cap) + ")");

    LowerBoundCertificate cert;
    cert.n_layers = v.n_layers();
    const double total = p0(v, p, cache);
    cert.c0 = cert.n_layers > 0 ? total / static_cast<double>(cert.n_layers) : 0.0;
    cert.A = A;

    double min_gap = 0.0;
    for (std::size_t i = 0; i < v.n_layers(); ++i) {
        const double gap = segment_length(p.zeros[v.labels[i]], p.zeros[v.labels[i + 1]]);
        min_gap = i == 0 ? gap : std::min(min_gap, gap);
    }
    cert.delta = delta > 0.0 ? delta : v.r * min_gap / 4.0;

    const std::size_t m = u.size();
    const std::size_t n = u[0].n();
    std::vector<GridFunction> prim(m, u[0]);
    for (std::size_t c = 0; c < m; ++c) {
        GridFunction diff = u[c];
        for (std::size_t i = 0; i < n; ++i)
            diff.values[i] = u[c].values[i] - p.zeros[v.plateau_label(diff.x(i))][c];
        prim[c] = primitive_tilde(diff);
    }
    GridFunction combined(u[0].a, u[0].b, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (std::size_t c = 0; c < m; ++c) sq += prim[c].values[i] * prim[c].values[i];
        combined.values[i] = std::sqrt(sq);
    }
    cert.l1_distance = trapezoid(combined);

    cert.excess = vector_p_eps(u, p, eps) - static_cast<double>(cert.n_layers) * cert.c0;
    cert.floor = -std::exp(-A / eps);
    if (cert.l1_distance > cert.delta)
        cert.verdict = CertificateVerdict::DistanceExceeded;
    else
        cert.verdict =
            cert.excess >= cert.floor ? CertificateVerdict::Pass : CertificateVerdict::Fail;
    return cert;
}

std::vector<GridFunction> build_vector_layer_profile(const VectorStepProfile& v,
                                                     const VectorPotential& p, double eps,
                                                     std::size_t n, PhiCache& cache) {
    if (!(eps > 0.0) || eps >= v.r)
        throw std::invalid_argument("build_vector_layer_profile: requires 0 < eps < r");
    if (n < 8) throw std::invalid_argument("build_vector_layer_profile: need at least 8 nodes");
    const double dx = (v.b - v.a) / static_cast<double>(n - 1);
    if (dx > eps / 4.0)
        throw std::invalid_argument(
            "build_vector_layer_profile: insufficient grid resolution (dx > eps/4)");

    const std::size_t m = p.m;
    // Oriented path and normalized-arclength table per jump.
    struct JumpPath {
        std::vector<std::vector<double>> pts;
        std::vector<double> cum;
    };
    std::vector<JumpPath> paths(v.n_layers());
    for (std::size_t i = 0; i < v.n_layers(); ++i) {
        const std::size_t la = v.labels[i];
        const std::size_t lb = v.labels[i + 1];
        JumpPath jp;
        jp.pts = cache.get(p, la, lb).points;
        if (la > lb) std::reverse(jp.pts.begin(), jp.pts.end());
        jp.cum = cumulative_fraction(jp.pts);
        paths[i] = std::move(jp);
    }

    const double sig_hi = 0.5 * (1.0 + std::tanh(v.r / eps / std::sqrt(2.0)));
    const double sig_lo = 1.0 - sig_hi;

    std::vector<GridFunction> out(m, GridFunction(v.a, v.b, std::vector<double>(n, 0.0)));
    for (std::size_t i = 0; i < n; ++i) {
        const double x = out[0].x(i);
        // The jump whose traversal window [h - r, h + r] contains x, if any.
        std::size_t jidx = v.jumps.size();
        for (std::size_t k = 0; k < v.jumps.size(); ++k)
            if (std::abs(x - v.jumps[k]) <= v.r) {
                jidx = k;
                break;
            }
        if (jidx == v.jumps.size()) {
            const auto& z = p.zeros[v.plateau_label(x)];
            for (std::size_t c = 0; c < m; ++c) out[c].values[i] = z[c];
            continue;
        }
        const double y = (x - v.jumps[jidx]) / eps;
        const double sigma = 0.5 * (1.0 + std::tanh(y / std::sqrt(2.0)));
        const double s = std::clamp((sigma - sig_lo) / (sig_hi - sig_lo), 0.0, 1.0);
        const auto z = path_point(paths[jidx].pts, paths[jidx].cum, s);
        for (std::size_t c = 0; c < m; ++c) out[c].values[i] = z[c];
    }
    return out;
}

}  // namespace hch

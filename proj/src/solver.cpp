#include "hch/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hch {

namespace {

// Two ghost nodes per side; offset +2. Neumann reflects evenly about the
// boundary node; Dirichlet reflects oddly about the pinned boundary value.
std::vector<double> extend2(const std::vector<double>& v, BoundaryKind kind, double pin_l,
                            double pin_r) {
    const std::size_t n = v.size();
    std::vector<double> e(n + 4);
    std::copy(v.begin(), v.end(), e.begin() + 2);
    if (kind == BoundaryKind::NeumannHomogeneous) {
        e[1] = v[1];
        e[0] = v[2];
        e[n + 2] = v[n - 2];
        e[n + 3] = v[n - 3];
    } else {
        e[1] = 2.0 * pin_l - v[1];
        e[0] = 2.0 * pin_l - v[2];
        e[n + 2] = 2.0 * pin_r - v[n - 2];
        e[n + 3] = 2.0 * pin_r - v[n - 3];
    }
    return e;
}

std::vector<double> d2_of_extended(const std::vector<double>& e, std::size_t n, double inv_dx2) {
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = (e[i + 3] - 2.0 * e[i + 2] + e[i + 1]) * inv_dx2;
    return y;
}

std::vector<double> d2_field(const std::vector<double>& v, BoundaryKind kind, double pin_l,
                             double pin_r, double inv_dx2) {
    return d2_of_extended(extend2(v, kind, pin_l, pin_r), v.size(), inv_dx2);
}

// D4 as the composite D2(D2(.)); the second stage reflects about 0 in
// Dirichlet mode (u_xx vanishes at a pinned boundary).
std::vector<double> d4_field(const std::vector<double>& v, BoundaryKind kind, double pin_l,
                             double pin_r, double inv_dx2) {
    return d2_field(d2_field(v, kind, pin_l, pin_r, inv_dx2), kind, 0.0, 0.0, inv_dx2);
}

std::vector<double> d2_of_wprime(const std::vector<double>& u, BoundaryKind kind, double pin_l,
                                 double pin_r, double inv_dx2, const ScalarPotential& p) {
    auto e = extend2(u, kind, pin_l, pin_r);
    for (double& x : e) x = p.deriv(x);
    return d2_of_extended(e, u.size(), inv_dx2);
}

void nan_guard(const std::vector<double>& v, const char* field) {
    for (double x : v)
        if (!std::isfinite(x))
            throw std::runtime_error(std::string("non-finite value in ") + field +
                                     " (NaN guard)");
}

std::shared_ptr<const ImplicitOperator> ensure_operator(
    const std::shared_ptr<const ImplicitOperator>& cache, std::size_t n, double dx, double diag,
    double biharm, BoundaryKind kind) {
    if (cache && cache->n == n && cache->dx == dx && cache->diag == diag &&
        cache->biharm == biharm && cache->kind == kind)
        return cache;
    auto op = std::make_shared<ImplicitOperator>();
    op->n = n;
    op->dx = dx;
    op->diag = diag;
    op->biharm = biharm;
    op->kind = kind;
    op->lu = BandedLU(n, 2, 2);
    const double inv_dx2 = 1.0 / (dx * dx);
    std::vector<double> e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        const auto col = d4_field(e, kind, 0.0, 0.0, inv_dx2);
        e[j] = 0.0;
        const std::size_t lo = j >= 2 ? j - 2 : 0;
        const std::size_t hi = std::min(n - 1, j + 2);
        for (std::size_t i = lo; i <= hi; ++i)
            op->lu.set(i, j, (i == j ? diag : 0.0) + biharm * col[i]);
    }
    if (kind == BoundaryKind::DirichletWells) {
        // Pinned boundary rows (identity): the solved field is fixed there.
        op->lu.set(0, 0, 1.0);
        op->lu.set(0, 1, 0.0);
        op->lu.set(0, 2, 0.0);
        op->lu.set(n - 1, n - 1, 1.0);
        op->lu.set(n - 1, n - 2, 0.0);
        op->lu.set(n - 1, n - 3, 0.0);
    }
    op->lu.factor();
    return op;
}

void require_min_size(const GridFunction& u) {
    if (u.n() < 8) throw std::invalid_argument("solver: grid must have at least 8 nodes");
}

}  // namespace

State make_state(GridFunction u0, GridFunction u1, Formulation form) {
    require_min_size(u0);
    State s;
    s.t = 0.0;
    if (form == Formulation::Flux) {
        require_same_grid(u0, u1);
        // J at the interior faces from the Neumann primitive of u1:
        // u_t = -J_x, so J = -tilde(u1) (exact when u1 has zero mean).
        const GridFunction tld = cumulative_trapezoid(u1);
        const double dx = u0.dx();
        GridFunction J(u0.a + 0.5 * dx, u0.b - 0.5 * dx, std::vector<double>(u0.n() - 1, 0.0));
        for (std::size_t i = 0; i + 1 < u0.n(); ++i)
            J.values[i] = -0.5 * (tld.values[i] + tld.values[i + 1]);
        s.w = std::move(J);
    } else if (form == Formulation::SecondOrder) {
        require_same_grid(u0, u1);
        s.w = std::move(u1);
    }
    s.u = std::move(u0);
    return s;
}

std::vector<double> apply_boundary_ghosts(const GridFunction& u, const BoundaryMode& mode) {
    require_min_size(u);
    if (mode.kind == BoundaryKind::NeumannHomogeneous)
        return extend2(u.values, mode.kind, 0.0, 0.0);
    return extend2(u.values, mode.kind, static_cast<double>(mode.left_sign),
                   static_cast<double>(mode.right_sign));
}

State step_second_order(const State& s, const SolverConfig& cfg, const ScalarPotential& p) {
    require_min_size(s.u);
    if (s.w.n() != s.u.n()) throw std::invalid_argument("step_second_order: velocity grid mismatch");
    const std::size_t n = s.u.n();
    const double dx = s.u.dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    const BoundaryKind kind = cfg.boundary.kind;
    const bool dir = kind == BoundaryKind::DirichletWells;
    const double pl = static_cast<double>(cfg.boundary.left_sign);
    const double pr = static_cast<double>(cfg.boundary.right_sign);
    const double r = cfg.tau / cfg.dt;

    auto cache = ensure_operator(s.cache, n, dx, r + 1.0, cfg.dt * cfg.eps * cfg.eps, kind);
    const auto d4u = d4_field(s.u.values, kind, dir ? pl : 0.0, dir ? pr : 0.0, inv_dx2);
    const auto d2w = d2_of_wprime(s.u.values, kind, dir ? pl : 0.0, dir ? pr : 0.0, inv_dx2, p);

    std::vector<double> rhs(n);
    const double e2 = cfg.eps * cfg.eps;
    for (std::size_t i = 0; i < n; ++i)
        rhs[i] = r * s.w.values[i] - e2 * d4u[i] + d2w[i];
    if (dir) rhs[0] = rhs[n - 1] = 0.0;  // u_t pinned to zero at the boundary
    cache->lu.solve(rhs);
    nan_guard(rhs, "u_t");

    State out;
    out.t = s.t + cfg.dt;
    out.u = s.u;
    for (std::size_t i = 0; i < n; ++i) out.u.values[i] = s.u.values[i] + cfg.dt * rhs[i];
    nan_guard(out.u.values, "u");
    out.w = s.w;
    out.w.values = std::move(rhs);
    out.cache = std::move(cache);
    return out;
}

State step_classic_ch(const State& s, const SolverConfig& cfg, const ScalarPotential& p) {
    require_min_size(s.u);
    const std::size_t n = s.u.n();
    const double dx = s.u.dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    const BoundaryKind kind = cfg.boundary.kind;
    const bool dir = kind == BoundaryKind::DirichletWells;
    const double pl = static_cast<double>(cfg.boundary.left_sign);
    const double pr = static_cast<double>(cfg.boundary.right_sign);
    const double biharm = cfg.dt * cfg.eps * cfg.eps;

    auto cache = ensure_operator(s.cache, n, dx, 1.0, biharm, kind);
    const auto d2w = d2_of_wprime(s.u.values, kind, dir ? pl : 0.0, dir ? pr : 0.0, inv_dx2, p);

    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = s.u.values[i] + cfg.dt * d2w[i];
    if (dir) {
        // Pin contribution of the affine ghost closure moves to the RHS.
        const std::vector<double> zero(n, 0.0);
        const auto affine = d4_field(zero, kind, pl, pr, inv_dx2);
        for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] -= biharm * affine[i];
        rhs[0] = pl;
        rhs[n - 1] = pr;
    }
    cache->lu.solve(rhs);
    nan_guard(rhs, "u");

    State out;
    out.t = s.t + cfg.dt;
    out.u = s.u;
    out.u.values = std::move(rhs);
    out.w = s.w;
    out.cache = std::move(cache);
    return out;
}

State step_flux(const State& s, const SolverConfig& cfg, const ScalarPotential& p) {
    require_min_size(s.u);
    if (cfg.boundary.kind != BoundaryKind::NeumannHomogeneous)
        throw std::invalid_argument("step_flux: flux formulation requires Neumann boundary");
    const std::size_t n = s.u.n();
    if (s.w.n() != n - 1) throw std::invalid_argument("step_flux: face field size mismatch");
    const double dx = s.u.dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    const double e2 = cfg.eps * cfg.eps;
    // tau = 0 is the ClassicCH limit; coefficients are specialized so that a
    // zero-relaxation flux step reproduces the semi-implicit classic step.
    const double beta = cfg.tau == 0.0 ? cfg.dt : cfg.dt * cfg.dt / (cfg.tau + cfg.dt);
    const double jdecay = cfg.tau == 0.0 ? 0.0 : cfg.tau / (cfg.tau + cfg.dt);
    const double cdiv = jdecay * cfg.dt;

    auto cache =
        ensure_operator(s.cache, n, dx, 1.0, beta * e2, BoundaryKind::NeumannHomogeneous);

    // Divergence of the face field with half cells at the boundary nodes;
    // boundary faces carry J = 0, which is what conserves the trapezoid mass.
    const auto divergence = [n, dx](const std::vector<double>& J) {
        std::vector<double> d(n);
        d[0] = J[0] / (0.5 * dx);
        for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (J[i] - J[i - 1]) / dx;
        d[n - 1] = -J[n - 2] / (0.5 * dx);
        return d;
    };

    const auto divJ = divergence(s.w.values);
    const auto d2w =
        d2_of_wprime(s.u.values, BoundaryKind::NeumannHomogeneous, 0.0, 0.0, inv_dx2, p);
    std::vector<double> rhs(n);
    for (std::size_t i = 0; i < n; ++i)
        rhs[i] = s.u.values[i] - cdiv * divJ[i] + beta * d2w[i];
    cache->lu.solve(rhs);  // rhs now holds the implicit u
    nan_guard(rhs, "u (implicit solve)");

    // Chemical potential with the implicit u in the stiff part, then the
    // diagonal J update and a divergence-form u update (mass-exact).
    const auto d2ustar = d2_field(rhs, BoundaryKind::NeumannHomogeneous, 0.0, 0.0, inv_dx2);
    std::vector<double> mu(n);
    for (std::size_t i = 0; i < n; ++i) mu[i] = -e2 * d2ustar[i] + p.deriv(s.u.values[i]);

    State out;
    out.t = s.t + cfg.dt;
    out.w = s.w;
    const double cgrad = cfg.tau == 0.0 ? 1.0 : cfg.dt / (cfg.tau + cfg.dt);
    for (std::size_t f = 0; f + 1 < n; ++f)
        out.w.values[f] = jdecay * s.w.values[f] - cgrad * (mu[f + 1] - mu[f]) / dx;
    nan_guard(out.w.values, "J");
    const auto divJnew = divergence(out.w.values);
    out.u = s.u;
    for (std::size_t i = 0; i < n; ++i) out.u.values[i] = s.u.values[i] - cfg.dt * divJnew[i];
    nan_guard(out.u.values, "u");
    out.cache = std::move(cache);
    return out;
}

State step(const State& s, const SolverConfig& cfg, const ScalarPotential& p) {
    switch (cfg.formulation) {
        case Formulation::SecondOrder: return step_second_order(s, cfg, p);
        case Formulation::Flux: return step_flux(s, cfg, p);
        case Formulation::ClassicCH: return step_classic_ch(s, cfg, p);
    }
    throw std::logic_error("step: unknown formulation");
}

double select_dt(const SolverConfig& cfg, const GridFunction& grid, const ScalarPotential& p) {
    if (!(cfg.safety > 0.0)) throw std::invalid_argument("select_dt: safety must be positive");
    const double dx = grid.dx();
    double wpp = 0.0;
    for (int i = 0; i <= 600; ++i) {
        const double u = -1.5 + 3.0 * i / 600.0;
        wpp = std::max(wpp, std::abs(p.deriv2(u)));
    }
    double dt = cfg.eps * dx * dx / wpp;
    if (cfg.tau > 0.0 && cfg.formulation != Formulation::ClassicCH) {
        dt = std::min(dt, cfg.tau);
        dt = std::min(dt, dx * dx * std::sqrt(cfg.tau) / cfg.eps);
    }
    return cfg.safety * dt;
}

State run(State s, const SolverConfig& cfg, const ScalarPotential& p,
          const std::vector<Observer>& observers, const StopPredicate& stop,
          std::size_t output_stride) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("run: dt must be positive");
    const std::size_t stride = std::max<std::size_t>(1, output_stride);
    for (const auto& ob : observers) ob(s, 0);
    if (stop && stop(s, 0)) return s;
    const double t0 = s.t;
    if (cfg.t_max <= t0) return s;
    const auto nsteps =
        static_cast<std::size_t>(std::ceil((cfg.t_max - t0) / cfg.dt - 1e-9));
    for (std::size_t k = 1; k <= nsteps; ++k) {
        try {
            s = step(s, cfg, p);
        } catch (const std::exception& e) {
            throw std::runtime_error("run: step " + std::to_string(k) + " at t=" +
                                     std::to_string(t0 + cfg.dt * static_cast<double>(k)) +
                                     ": " + e.what());
        }
        s.t = t0 + cfg.dt * static_cast<double>(k);
        if (k % stride == 0 || k == nsteps) {
            for (const auto& ob : observers) ob(s, k);
            if (stop && stop(s, k)) break;
        }
    }
    return s;
}

GridFunction time_derivative(const State& s, const SolverConfig& cfg, const ScalarPotential& p) {
    if (cfg.formulation == Formulation::SecondOrder) return s.w;
    GridFunction ut = s.u;
    const std::size_t n = s.u.n();
    if (cfg.formulation == Formulation::Flux) {
        const double dx = s.u.dx();
        ut.values[0] = -s.w.values[0] / (0.5 * dx);
        for (std::size_t i = 1; i + 1 < n; ++i)
            ut.values[i] = -(s.w.values[i] - s.w.values[i - 1]) / dx;
        ut.values[n - 1] = s.w.values[n - 2] / (0.5 * dx);
        return ut;
    }
    // ClassicCH: u_t equals the parabolic right-hand side.
    const double inv_dx2 = 1.0 / (s.u.dx() * s.u.dx());
    const bool dir = cfg.boundary.kind == BoundaryKind::DirichletWells;
    const double pl = static_cast<double>(cfg.boundary.left_sign);
    const double pr = static_cast<double>(cfg.boundary.right_sign);
    const auto d4u = d4_field(s.u.values, cfg.boundary.kind, dir ? pl : 0.0, dir ? pr : 0.0,
                              inv_dx2);
    const auto d2w = d2_of_wprime(s.u.values, cfg.boundary.kind, dir ? pl : 0.0, dir ? pr : 0.0,
                                  inv_dx2, p);
    const double e2 = cfg.eps * cfg.eps;
    for (std::size_t i = 0; i < n; ++i) ut.values[i] = -e2 * d4u[i] + d2w[i];
    if (dir) ut.values[0] = ut.values[n - 1] = 0.0;
    return ut;
}

GridFunction d2_neumann(const GridFunction& g) {
    require_min_size(g);
    GridFunction out = g;
    out.values = d2_field(g.values, BoundaryKind::NeumannHomogeneous, 0.0, 0.0,
                          1.0 / (g.dx() * g.dx()));
    return out;
}

std::shared_ptr<const ImplicitOperator> second_order_operator(
    const std::shared_ptr<const ImplicitOperator>& cache, std::size_t n, double dx,
    const SolverConfig& cfg) {
    return ensure_operator(cache, n, dx, cfg.tau / cfg.dt + 1.0, cfg.dt * cfg.eps * cfg.eps,
                           cfg.boundary.kind);
}

}  // namespace hch

#include "hch/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "hch/quad.hpp"

namespace hch {

namespace {
constexpr double kClamp = 1.0 - 1e-12;   // omega clamp beyond the table
constexpr double kTableEdge = 1e-10;     // 1 - |u| at the last table level
constexpr double kMaxTableGap = 0.05;    // x resolution of the inverse table
}  // namespace

double StepProfile::plateau(std::size_t i) const {
    return (i % 2 == 0) ? static_cast<double>(left_value) : -static_cast<double>(left_value);
}

// A point exactly on a jump takes the right plateau (upper_bound counts it).
double StepProfile::value(double x) const {
    const auto it = std::upper_bound(jumps.begin(), jumps.end(), x);
    return plateau(static_cast<std::size_t>(it - jumps.begin()));
}

StandingWave::StandingWave(const ScalarPotential& p) : quartic_(p.quartic) {
    if (quartic_) return;
    if (p.wells[0] != -1.0 || p.wells[1] != 1.0)
        throw std::invalid_argument("StandingWave: requires wells at -1 and +1");

    // Within kWellZone of a well, evaluating W directly cancels to roundoff
    // noise, so the quadratic well model W''(z)/2 d^2 takes over; its x
    // integral is the closed form ln(d0/d1)/sqrt(W''(z)), no quadrature.
    constexpr double kWellZone = 1e-4;
    const double lam_l = p.deriv2(-1.0), lam_r = p.deriv2(1.0);
    if (!(lam_l > 0.0) || !(lam_r > 0.0))
        throw std::runtime_error("StandingWave: W'' at a well is not positive");
    const auto well_w = [&p, lam_l, lam_r](double s) {
        const double dl = std::abs(s + 1.0), dr = std::abs(s - 1.0);
        if (dr < kWellZone) return 0.5 * lam_r * dr * dr;
        if (dl < kWellZone) return 0.5 * lam_l * dl * dl;
        return p.eval(s);
    };
    const auto integrand = [&well_w](double s) {
        return 1.0 / std::sqrt(std::max(2.0 * well_w(s), 1e-300));
    };
    // 1e-9 per segment stays above the roundoff floor of W outside the well
    // zones and keeps the table error far below the interpolation error.
    const auto segment = [&](double u0, double u1, const char* side) {
        const double d0 = 1.0 - std::abs(u0), d1 = 1.0 - std::abs(u1);
        if (d0 <= kWellZone * (1.0 + 1e-12) && d1 <= kWellZone * (1.0 + 1e-12)) {
            const double lam = u1 > 0.0 ? lam_r : lam_l;
            const double mag = std::log(d0 / d1) / std::sqrt(lam);
            return u1 > 0.0 ? mag : -mag;
        }
        try {
            return adaptive_simpson(integrand, u0, u1, 1e-9);
        } catch (const std::exception&) {
            throw std::runtime_error(std::string("StandingWave: quadrature failed near the ") +
                                     side + " endpoint");
        }
    };

    // Graded u levels for one side: uniform core, geometric clustering at 1,
    // with the well-zone edge inserted so segments never straddle it.
    std::vector<double> levels{0.0};
    for (int k = 1; k <= 64; ++k) levels.push_back(0.9 * k / 64.0);
    for (double d = 0.1 * 0.8; d > kTableEdge; d *= 0.8) levels.push_back(1.0 - d);
    levels.push_back(1.0 - kWellZone);
    levels.push_back(1.0 - kTableEdge);
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    // Tabulate both sides (the potential need not be even), refining any
    // segment whose x extent exceeds kMaxTableGap.
    std::vector<std::pair<double, double>> table{{0.0, 0.0}};  // (u, x)
    for (int sign : {+1, -1}) {
        const char* side = sign > 0 ? "+1" : "-1";
        double ucur = 0.0, xcur = 0.0;
        std::vector<double> pending;
        for (std::size_t k = 1; k < levels.size(); ++k) pending.push_back(sign * levels[k]);
        std::reverse(pending.begin(), pending.end());
        while (!pending.empty()) {
            const double unext = pending.back();
            const double dx = segment(ucur, unext, side);
            if (std::abs(dx) > kMaxTableGap && std::abs(unext - ucur) > 1e-13) {
                pending.push_back(0.5 * (ucur + unext));
                continue;
            }
            pending.pop_back();
            xcur += dx;
            ucur = unext;
            table.emplace_back(ucur, xcur);
        }
    }
    std::sort(table.begin(), table.end(),
              [](const auto& l, const auto& r) { return l.second < r.second; });
    xs_.reserve(table.size());
    us_.reserve(table.size());
    slopes_.reserve(table.size());
    for (const auto& [u, x] : table) {
        xs_.push_back(x);
        us_.push_back(u);
        slopes_.push_back(std::sqrt(std::max(0.0, 2.0 * well_w(u))));
    }
}

double StandingWave::operator()(double x) const {
    if (quartic_) return std::tanh(x / std::sqrt(2.0));
    if (x <= xs_.front()) return -kClamp;
    if (x >= xs_.back()) return kClamp;
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs_.begin());
    const double x0 = xs_[j - 1], x1 = xs_[j];
    const double u0 = us_[j - 1], u1 = us_[j];
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t, t3 = t2 * t;
    double v = u0 * (2.0 * t3 - 3.0 * t2 + 1.0) + slopes_[j - 1] * h * (t3 - 2.0 * t2 + t) +
               u1 * (-2.0 * t3 + 3.0 * t2) + slopes_[j] * h * (t3 - t2);
    return std::clamp(v, std::min(u0, u1), std::max(u0, u1));
}

double standing_wave(const ScalarPotential& p, double x) { return StandingWave(p)(x); }

StepProfile build_step(double a, double b, std::vector<double> jumps, double r, int left_value) {
    if (!(a < b)) throw std::invalid_argument("build_step: requires a < b");
    if (!(r > 0.0)) throw std::invalid_argument("build_step: radius must be positive");
    if (left_value != -1 && left_value != 1)
        throw std::invalid_argument("build_step: left_value must be -1 or +1");
    const double slack = 1e-12 * (b - a);
    for (std::size_t i = 1; i < jumps.size(); ++i) {
        if (!(jumps[i] > jumps[i - 1]))
            throw std::invalid_argument("build_step: jumps not strictly increasing");
        if (jumps[i] - jumps[i - 1] < 2.0 * r - slack)
            throw std::invalid_argument("build_step: separation violated between jumps " +
                                        std::to_string(i) + " and " + std::to_string(i + 1));
    }
    if (!jumps.empty() && (jumps.front() - r < a - slack || jumps.back() + r > b + slack))
        throw std::invalid_argument("build_step: jump too close to boundary");
    StepProfile v;
    v.a = a;
    v.b = b;
    v.jumps = std::move(jumps);
    v.r = r;
    v.left_value = left_value;
    return v;
}

GridFunction sample_step(const StepProfile& v, std::size_t n) {
    if (n < 8) throw std::invalid_argument("sample_step: need at least 8 nodes");
    GridFunction g(v.a, v.b, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) g.values[i] = v.value(g.x(i));
    return g;
}

GridFunction build_layer_profile(const StepProfile& v, const ScalarPotential& p, double eps,
                                 std::size_t n) {
    if (!(eps > 0.0) || eps >= v.r)
        throw std::invalid_argument("build_layer_profile: requires 0 < eps < r");
    if (n < 8) throw std::invalid_argument("build_layer_profile: need at least 8 nodes");
    const double dx = (v.b - v.a) / static_cast<double>(n - 1);
    if (dx > eps / 4.0)
        throw std::invalid_argument("build_layer_profile: insufficient grid resolution (dx > eps/4)");
    const StandingWave omega(p);
    const double redge = v.r / eps - 1.0;  // |argument| of omega at the collar joints
    GridFunction g(v.a, v.b, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double x = g.x(i);
        // Nearest jump whose (h - r, h + r) interval could contain x.
        const auto it = std::lower_bound(v.jumps.begin(), v.jumps.end(), x);
        double val = 0.0;
        bool inside = false;
        for (const auto* cand : {it != v.jumps.begin() ? &*(it - 1) : nullptr,
                                 it != v.jumps.end() ? &*it : nullptr}) {
            if (cand == nullptr || inside) continue;
            const double h = *cand;
            if (!(x > h - v.r && x < h + v.r)) continue;
            inside = true;
            const std::size_t idx = static_cast<std::size_t>(cand - v.jumps.data());
            const double s = (idx % 2 == 0) ? static_cast<double>(-v.left_value)
                                            : static_cast<double>(v.left_value);
            if (x < h - v.r + eps) {
                const double joint = omega(-s * redge);
                val = -s + ((x - (h - v.r)) / eps) * (joint + s);
            } else if (x > h + v.r - eps) {
                const double joint = omega(s * redge);
                val = s + (((h + v.r) - x) / eps) * (joint - s);
            } else {
                val = omega(s * (x - h) / eps);
            }
        }
        g.values[i] = inside ? val : v.value(x);
    }
    return g;
}

GridFunction primitive_bar(const GridFunction& u) {
    GridFunction cum = cumulative_trapezoid(u);
    const double c = mean(cum);
    for (double& v : cum.values) v -= c;
    return cum;
}

GridFunction primitive_tilde(const GridFunction& u) { return cumulative_trapezoid(u); }

GridFunction project_zero_mean(const GridFunction& u1) {
    GridFunction out = u1;
    const double c = mean(u1);
    for (double& v : out.values) v -= c;
    return out;
}

BudgetReport velocity_budget_check(const GridFunction& u1, const LayerParameters& params,
                                   double tau, const BoundaryMode& mode) {
    const GridFunction prim = mode.kind == BoundaryKind::DirichletWells ? primitive_bar(u1)
                                                                        : primitive_tilde(u1);
    BudgetReport rep;
    rep.value = tau * l2_norm_sq(prim);
    rep.budget = params.eps * (params.f_budget + std::exp(-params.A / params.eps));
    rep.ratio = rep.budget > 0.0 ? rep.value / rep.budget
                                 : (rep.value > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    rep.pass = rep.value <= rep.budget;
    return rep;
}

void validate_layer_parameters(const LayerParameters& params, const ScalarPotential& p, double r) {
    if (!(params.eps > 0.0) || params.eps >= r)
        throw std::invalid_argument("layer parameters: requires 0 < eps < r");
    const StiffnessConstants s = stiffness(p, r);
    if (!(params.A > 0.0) || params.A >= s.rate_cap)
        throw std::invalid_argument("layer parameters: A must lie in (0, r*sqrt(2*lambda)) = (0, " +
                                    std::to_string(s.rate_cap) + ")");
    if (params.f_budget < 0.0)
        throw std::invalid_argument("layer parameters: f_budget must be non-negative");
}

GridFunction make_noise_velocity(double a, double b, std::size_t n, double amplitude,
                                 std::uint64_t seed) {
    if (n < 8) throw std::invalid_argument("make_noise_velocity: need at least 8 nodes");
    std::mt19937_64 rng(seed);
    const auto unit = [&rng]() {
        return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);  // [0, 1)
    };
    constexpr int kModes = 8;
    std::vector<double> coef(kModes);
    for (int k = 0; k < kModes; ++k) coef[k] = (2.0 * unit() - 1.0) / static_cast<double>(k + 1);
    GridFunction g(a, b, std::vector<double>(n, 0.0));
    const double pi = std::acos(-1.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(n - 1);
        double v = 0.0;
        for (int k = 0; k < kModes; ++k) v += coef[k] * std::sin(2.0 * pi * (k + 1) * s);
        g.values[i] = v;
    }
    double peak = 0.0;
    for (double v : g.values) peak = std::max(peak, std::abs(v));
    const double scale = peak > 0.0 ? amplitude / peak : 0.0;
    for (double& v : g.values) v *= scale;
    return project_zero_mean(g);
}

}  // namespace hch

#include "hch/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace hch {

GridFunction::GridFunction(double a_, double b_, std::vector<double> v)
    : a(a_), b(b_), values(std::move(v)) {
    if (!(a < b)) throw std::invalid_argument("GridFunction: requires a < b");
    if (values.size() < 2) throw std::invalid_argument("GridFunction: requires at least 2 nodes");
}

void require_same_grid(const GridFunction& f, const GridFunction& g) {
    if (f.n() != g.n() || f.a != g.a || f.b != g.b)
        throw std::invalid_argument("grid mismatch between operands");
}

double trapezoid(const GridFunction& f) {
    const std::size_t n = f.n();
    double s = 0.5 * (f.values.front() + f.values.back());
    for (std::size_t i = 1; i + 1 < n; ++i) s += f.values[i];
    return s * f.dx();
}

double l1_norm(const GridFunction& f) {
    const std::size_t n = f.n();
    double s = 0.5 * (std::abs(f.values.front()) + std::abs(f.values.back()));
    for (std::size_t i = 1; i + 1 < n; ++i) s += std::abs(f.values[i]);
    return s * f.dx();
}

double l2_norm_sq(const GridFunction& f) {
    const std::size_t n = f.n();
    double s = 0.5 * (f.values.front() * f.values.front() + f.values.back() * f.values.back());
    for (std::size_t i = 1; i + 1 < n; ++i) s += f.values[i] * f.values[i];
    return s * f.dx();
}

double mean(const GridFunction& f) { return trapezoid(f) / (f.b - f.a); }

GridFunction cumulative_trapezoid(const GridFunction& f) {
    GridFunction out = f;
    const double h = f.dx();
    out.values[0] = 0.0;
    for (std::size_t i = 1; i < f.n(); ++i)
        out.values[i] = out.values[i - 1] + 0.5 * h * (f.values[i - 1] + f.values[i]);
    return out;
}

double l1_distance(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g);
    GridFunction d = f;
    for (std::size_t i = 0; i < d.n(); ++i) d.values[i] -= g.values[i];
    return l1_norm(d);
}

double l2_distance(const GridFunction& f, const GridFunction& g) {
    require_same_grid(f, g);
    GridFunction d = f;
    for (std::size_t i = 0; i < d.n(); ++i) d.values[i] -= g.values[i];
    return std::sqrt(l2_norm_sq(d));
}

}  // namespace hch

#pragma once

#include <cstddef>
#include <vector>

namespace hch {

// Uniformly spaced samples of a function on [a, b], endpoints included.
// Invariant: n >= 2 and a < b. Most operations additionally require n >= 8.
struct GridFunction {
    double a = 0.0;
    double b = 1.0;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(double a_, double b_, std::vector<double> v);

    std::size_t n() const { return values.size(); }
    double dx() const { return (b - a) / static_cast<double>(values.size() - 1); }
    double x(std::size_t i) const { return a + dx() * static_cast<double>(i); }
};

// Same-grid check used before binary operations; throws on mismatch.
void require_same_grid(const GridFunction& f, const GridFunction& g);

// Trapezoid quadrature of the samples.
double trapezoid(const GridFunction& f);

// Trapezoid-weighted norms and mean.
double l1_norm(const GridFunction& f);
double l2_norm_sq(const GridFunction& f);
double mean(const GridFunction& f);

// Cumulative trapezoid integral; result(x) = int_a^x f, result(a) = 0.
GridFunction cumulative_trapezoid(const GridFunction& f);

// l1 / l2 distances on a shared grid.
double l1_distance(const GridFunction& f, const GridFunction& g);
double l2_distance(const GridFunction& f, const GridFunction& g);

}  // namespace hch

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace hch {

// Double-well energy density W with exact derivatives and declared wells.
// Wells are data, not root-found; custom potentials must declare theirs.
struct ScalarPotential {
    std::function<double(double)> eval;
    std::function<double(double)> deriv;
    std::function<double(double)> deriv2;
    std::array<double, 2> wells{-1.0, 1.0};
    bool quartic = false;  // enables the closed-form standing wave
};

// lambda = min W'' over the wells; rate_cap = r * sqrt(2 * lambda), the
// supremum of admissible decay rates A for a layer radius r.
struct StiffnessConstants {
    double lambda = 0.0;
    double rate_cap = 0.0;
};

// Multi-well potential W: R^m -> R with declared zeros z_1..z_K.
struct VectorPotential {
    std::size_t m = 1;
    std::function<double(const std::vector<double>&)> eval;
    std::function<std::vector<double>(const std::vector<double>&)> grad;
    // Hessian as a row-major m*m array.
    std::function<std::vector<double>(const std::vector<double>&)> hess;
    std::vector<std::vector<double>> zeros;
    double lambda0 = 0.0;
};

struct ValidationReport {
    bool pass = true;
    std::string message;   // worst violation, empty on pass
    double location = 0.0; // u (or component value) where it occurred
    double violation = 0.0;
};

ScalarPotential make_quartic();

// coeffs in ascending degree; derivatives are differentiated exactly.
ScalarPotential make_polynomial(const std::vector<double>& coeffs, std::array<double, 2> wells);

// Checks W(w)=0, W'(w)=0, W''(w)>0 at the wells and W>0 on a uniform sample
// grid over [wells.min - 1, wells.max + 1]; never throws.
ValidationReport validate(const ScalarPotential& p, std::size_t samples = 1000);

// Transition cost between the wells: integral of sqrt(2 W) by adaptive
// Simpson quadrature with absolute tolerance tol.
double c0(const ScalarPotential& p, double tol = 1e-12);

StiffnessConstants stiffness(const ScalarPotential& p, double r);

VectorPotential embed_scalar(const ScalarPotential& p);

// W(u) = sum_j Wq(u_j); zeros are all sign patterns in {-1,+1}^m.
VectorPotential make_decoupled_quartic(std::size_t m);

// W(u) = sum_j P_j(u_j) with per-component polynomial coefficient lists;
// zeros are the cartesian product of the component wells.
VectorPotential make_polynomial_sum(const std::vector<std::vector<double>>& coeffs,
                                    const std::vector<std::array<double, 2>>& wells);

ValidationReport validate(const VectorPotential& p, std::size_t samples = 200);

// lambda0 = min over zeros of the smallest Hessian eigenvalue; throws if a
// Hessian is non-symmetric beyond 1e-10.
double min_hessian_eigenvalue(const VectorPotential& p);

}  // namespace hch

#pragma once

#include <functional>

namespace hch {

// Adaptive composite Simpson rule with interval bisection. The local
// acceptance test is the usual Richardson estimate |S2 - S1| / 15 against a
// tolerance split across subintervals. Throws when the depth cap is reached
// before the requested tolerance, naming the achieved error estimate.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 60);

}  // namespace hch

#include "hch/quad.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace hch {

namespace {

struct SimpsonState {
    const std::function<double(double)>& f;
    int max_depth;
    double failed_error = 0.0;  // accumulated |S2-S1|/15 on capped intervals

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
        const double flm = f(lm), frm = f(rm);
        const double h6 = (b - a) / 12.0;
        const double left = h6 * (fa + 4.0 * flm + fm);
        const double right = h6 * (fm + 4.0 * frm + fb);
        const double err = (left + right - whole) / 15.0;
        if (std::abs(err) <= tol) return left + right + err;
        if (depth >= max_depth) {
            failed_error += std::abs(err);
            return left + right + err;
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (!(tol > 0.0)) throw std::invalid_argument("adaptive_simpson: tol must be positive");
    if (a == b) return 0.0;
    const double sgn = a < b ? 1.0 : -1.0;
    if (sgn < 0.0) std::swap(a, b);
    SimpsonState st{f, max_depth};
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double result = st.recurse(a, b, fa, fm, fb, whole, tol, 0);
    if (st.failed_error > tol) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "adaptive_simpson: tolerance %g not reached; achieved error estimate "
                      "about %g",
                      tol, st.failed_error);
        throw std::runtime_error(msg);
    }
    return sgn * result;
}

}  // namespace hch

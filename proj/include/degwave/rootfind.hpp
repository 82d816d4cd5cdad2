#ifndef DEGWAVE_ROOTFIND_HPP
#define DEGWAVE_ROOTFIND_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "degwave/errors.hpp"

namespace degwave {

// Bracketed scalar root finding: bisection with secant acceleration.
// Requires f(lo)*f(hi) <= 0. Stops when the bracket or the residual is
// below tol_abs + tol_rel*|x|.
template <class F>
double bisect_secant(F&& f, double lo, double hi,
                     double tol_abs = 1e-12, double tol_rel = 1e-12,
                     int max_iter = 200) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (std::isnan(flo) || std::isnan(fhi) || flo * fhi > 0.0)
        throw NumericalError("bisect_secant: root not bracketed");
    double x = 0.5 * (lo + hi);
    double width_check = hi - lo;
    for (int it = 0; it < max_iter; ++it) {
        // secant candidate, fall back to midpoint when outside the bracket
        double xs = hi - fhi * (hi - lo) / (fhi - flo);
        double xm = 0.5 * (lo + hi);
        x = (xs > lo && xs < hi) ? xs : xm;
        // do not let the secant stagnate at a bracket edge: force a true
        // bisection every other iteration unless the bracket is halving
        if (it % 2 == 1 && hi - lo > 0.5 * width_check) x = xm;
        if (it % 2 == 1) width_check = hi - lo;
        double min_step = 0.25 * (tol_abs + tol_rel * std::fabs(x));
        if (x - lo < min_step || hi - x < min_step) x = xm;
        double fx = f(x);
        if (fx == 0.0) return x;
        if (flo * fx < 0.0) { hi = x; fhi = fx; }
        else               { lo = x; flo = fx; }
        if (hi - lo <= tol_abs + tol_rel * std::fabs(x)) break;
    }
    return 0.5 * (lo + hi);
}

// Golden-section maximization of a unimodal function on [lo, hi].
template <class F>
double golden_max(F&& f, double lo, double hi, double tol = 1e-10, int max_iter = 400) {
    const double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < max_iter && (b - a) > tol * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
        if (f1 < f2) {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + invphi * (b - a); f2 = f(x2);
        } else {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - invphi * (b - a); f1 = f(x1);
        }
    }
    return 0.5 * (a + b);
}

// Result of a damped 2x2 Newton iteration.
struct Newton2Result {
    bool converged = false;
    double x = 0.0, y = 0.0;     // solution
    double f1 = 0.0, f2 = 0.0;   // residuals at the solution
    int iterations = 0;
};

// Damped Newton for F(x,y) = (f1,f2) = 0 with a user-supplied Jacobian.
// `admissible(x,y)` constrains the iterates (step is halved until it holds).
inline Newton2Result newton2(
    const std::function<void(double, double, double&, double&)>& fun,
    const std::function<void(double, double, double&, double&, double&, double&)>& jac,
    double x0, double y0,
    const std::function<bool(double, double)>& admissible,
    double tol = 1e-13, int max_iter = 200) {
    Newton2Result res;
    double x = x0, y = y0;
    double f1, f2;
    fun(x, y, f1, f2);
    double nrm = std::hypot(f1, f2);
    for (int it = 0; it < max_iter; ++it) {
        res.iterations = it + 1;
        double j11, j12, j21, j22;
        jac(x, y, j11, j12, j21, j22);
        double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) return res;
        double dx = (-f1 * j22 + f2 * j12) / det;
        double dy = (-f2 * j11 + f1 * j21) / det;
        double alpha = 1.0;
        double xn = x, yn = y, f1n = f1, f2n = f2, nn = nrm;
        bool improved = false;
        for (int h = 0; h < 12; ++h) {
            double xt = x + alpha * dx, yt = y + alpha * dy;
            if (admissible(xt, yt)) {
                double g1, g2;
                fun(xt, yt, g1, g2);
                double nt = std::hypot(g1, g2);
                if (std::isfinite(nt) && nt < nrm) {
                    xn = xt; yn = yt; f1n = g1; f2n = g2; nn = nt;
                    improved = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!improved) return res;
        double step = std::hypot(xn - x, yn - y);
        x = xn; y = yn; f1 = f1n; f2 = f2n; nrm = nn;
        if (nrm < tol || step < tol * (1.0 + std::fabs(x) + std::fabs(y))) {
            res.converged = true;
            break;
        }
    }
    res.x = x; res.y = y; res.f1 = f1; res.f2 = f2;
    return res;
}

} // namespace degwave

#endif

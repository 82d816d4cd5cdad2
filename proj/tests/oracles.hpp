// Test-only oracles, independent of the library's solver paths.
#ifndef DEGWAVE_TEST_ORACLES_HPP
#define DEGWAVE_TEST_ORACLES_HPP

#include <cmath>
#include <functional>

namespace oracles {

// Plain bisection, no secant acceleration (independent of rootfind.hpp).
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
    double flo = f(lo);
    for (int i = 0; i < iters; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = f(mid);
        if ((flo < 0.0) == (fm < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Fine fixed-step RK4 phase-plane shooting for the delay-free wave equation
//   c phi' = D (phi^m)'' - d(phi) + b(phi),
// in the variables (phi, psi = D (phi^m)'): the sharp orbit leaves (0,0)
// with psi ~ c phi; it survives past phi_end iff c is supercritical.
inline bool sharp_orbit_survives(double c, double m, double D,
                                 const std::function<double(double)>& react,
                                 double phi_end, int steps = 200000) {
    double phi = 1e-9 * phi_end;
    double psi = c * phi;
    double h = (phi_end - phi) / steps;
    auto f = [&](double ph, double ps) {
        return c - D * m * std::pow(ph, m - 1.0) * react(ph) / ps;
    };
    for (int i = 0; i < steps; ++i) {
        double k1 = f(phi, psi);
        if (!(psi + 0.5 * h * k1 > 0.0)) return false;
        double k2 = f(phi + 0.5 * h, psi + 0.5 * h * k1);
        if (!(psi + 0.5 * h * k2 > 0.0)) return false;
        double k3 = f(phi + 0.5 * h, psi + 0.5 * h * k2);
        if (!(psi + h * k3 > 0.0)) return false;
        double k4 = f(phi + h, psi + h * k3);
        psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        phi += h;
        if (!(psi > 0.0) || !std::isfinite(psi)) return false;
    }
    return true;
}

// Bisection on the survival predicate: the delay-free sharp speed.
inline double sharp_speed_delay_free(double m, double D,
                                     const std::function<double(double)>& react,
                                     double phi_end, double c_lo = 0.05,
                                     double c_hi = 8.0) {
    for (int i = 0; i < 46; ++i) {
        double mid = 0.5 * (c_lo + c_hi);
        if (sharp_orbit_survives(mid, m, D, react, phi_end))
            c_hi = mid;
        else
            c_lo = mid;
    }
    return 0.5 * (c_lo + c_hi);
}

} // namespace oracles

#endif

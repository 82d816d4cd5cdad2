#ifndef DEGWAVE_ODE45_HPP
#define DEGWAVE_ODE45_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "degwave/errors.hpp"

namespace degwave {

using State2 = std::array<double, 2>;

// One stored step of a trajectory: cubic Hermite data for both components.
struct HermitePiece {
    double t0, t1;
    State2 y0, y1, f0, f1;

    State2 eval(double t) const {
        double h = t1 - t0;
        double s = (t - t0) / h;
        double s2 = s * s, s3 = s2 * s;
        double h00 = 2 * s3 - 3 * s2 + 1;
        double h10 = s3 - 2 * s2 + s;
        double h01 = -2 * s3 + 3 * s2;
        double h11 = s3 - s2;
        State2 out;
        for (int i = 0; i < 2; ++i)
            out[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
        return out;
    }
};

// Piecewise-cubic dense output over contiguous accepted steps.
class DenseTrajectory {
public:
    std::vector<HermitePiece> pieces;

    bool empty() const { return pieces.empty(); }
    double t_begin() const { return pieces.front().t0; }
    double t_end() const { return pieces.back().t1; }

    State2 eval(double t) const {
        const HermitePiece& p = locate(t);
        return p.eval(t);
    }

private:
    const HermitePiece& locate(double t) const {
        if (t <= pieces.front().t0) return pieces.front();
        if (t >= pieces.back().t1) return pieces.back();
        std::size_t lo = 0, hi = pieces.size() - 1;
        while (lo < hi) {
            std::size_t mid = (lo + hi) / 2;
            if (pieces[mid].t1 < t) lo = mid + 1;
            else hi = mid;
        }
        return pieces[lo];
    }
};

struct StepControl {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_init = 1e-4;
    double h_max = 1e30;
    double h_min_rel = 1e-15;  // underflow threshold relative to |t|+1
};

enum class StepAction { Continue, Stop };

// Dormand-Prince 5(4) adaptive integrator for a 2-component system.
// Calls `on_step(t, y, f)` after every accepted step; the callback may stop
// the run. Accepted steps are appended to `out` as cubic Hermite pieces.
// Returns false when the step size underflowed before reaching t_end.
template <class RHS, class OnStep>
bool integrate_ode45(RHS&& rhs, double t0, State2 y0, double t_end,
                     const StepControl& ctl, DenseTrajectory* out, OnStep&& on_step) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double t = t0;
    State2 y = y0;
    State2 k1 = rhs(t, y);
    double h = std::min(ctl.h_init, t_end - t0);

    while (t < t_end) {
        h = std::min(h, t_end - t);
        if (h < ctl.h_min_rel * (std::fabs(t) + 1.0)) return false;

        State2 k2, k3, k4, k5, k6, k7, y5, yt;
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * a21 * k1[i];
        k2 = rhs(t + c2 * h, yt);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        k3 = rhs(t + c3 * h, yt);
        for (int i = 0; i < 2; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        k4 = rhs(t + c4 * h, yt);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        k5 = rhs(t + c5 * h, yt);
        for (int i = 0; i < 2; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        k6 = rhs(t + h, yt);
        for (int i = 0; i < 2; ++i)
            y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        k7 = rhs(t + h, y5);

        double err = 0.0;
        bool finite = true;
        for (int i = 0; i < 2; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                             e6 * k6[i] + e7 * k7[i]);
            double sc = ctl.atol + ctl.rtol * std::max(std::fabs(y[i]), std::fabs(y5[i]));
            err += (ei / sc) * (ei / sc);
            if (!std::isfinite(y5[i])) finite = false;
        }
        err = std::sqrt(0.5 * err);

        if (!finite || err > 1.0) {
            double fac = finite ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
            h *= fac;
            continue;
        }

        if (out) out->pieces.push_back(HermitePiece{t, t + h, y, y5, k1, k7});
        t += h;
        y = y5;
        k1 = k7;  // FSAL

        if (on_step(t, y, k1) == StepAction::Stop) return true;

        double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h = std::min(ctl.h_max, h * std::clamp(fac, 0.2, 5.0));
    }
    return true;
}

} // namespace degwave

#endif

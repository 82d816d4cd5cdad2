#include "degwave/charspec.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "degwave/quadrature.hpp"
#include "degwave/rootfind.hpp"

namespace degwave {

CharContext make_char_context(const KineticsSpec& spec, const DerivedConstants& dc) {
    CharContext ctx;
    ctx.spec = spec;
    ctx.consts = dc;
    ctx.a_kappa = spec.diffusivity * spec.m * std::pow(dc.kappa, spec.m - 1.0);
    return ctx;
}

CharContext make_char_context(const KineticsSpec& spec) {
    return make_char_context(spec, derive_constants(spec));
}

double chi0(const CharContext& ctx, double c, double lambda) {
    if (!(c > 0.0)) throw DomainError("chi0: requires c > 0");
    double cr = c * ctx.spec.delay;
    return ctx.consts.bp0 * std::exp(-lambda * cr) - c * lambda - ctx.consts.dp0;
}

double chik(const CharContext& ctx, double c, double lambda) {
    if (!(c > 0.0)) throw DomainError("chik: requires c > 0");
    double cr = c * ctx.spec.delay;
    return ctx.a_kappa * lambda * lambda + ctx.consts.bpk * std::exp(-lambda * cr) -
           c * lambda - ctx.consts.dpk;
}

std::complex<double> chik(const CharContext& ctx, double c, std::complex<double> lambda) {
    if (!(c > 0.0)) throw DomainError("chik: requires c > 0");
    double cr = c * ctx.spec.delay;
    return ctx.a_kappa * lambda * lambda + ctx.consts.bpk * std::exp(-lambda * cr) -
           c * lambda - ctx.consts.dpk;
}

double chik_dlambda(const CharContext& ctx, double c, double lambda) {
    double cr = c * ctx.spec.delay;
    return 2.0 * ctx.a_kappa * lambda - cr * ctx.consts.bpk * std::exp(-lambda * cr) - c;
}

double omega_r(const CharContext& ctx) {
    double bp0 = ctx.consts.bp0, dp0 = ctx.consts.dp0, r = ctx.spec.delay;
    if (!(bp0 > dp0)) throw ModelError("lambda0: requires b'(0) > d'(0)");
    if (r == 0.0) return bp0 - dp0;
    return bisect_secant([&](double w) { return bp0 * std::exp(-r * w) - w - dp0; },
                         0.0, bp0 - dp0, 0.0, 1e-14);
}

double lambda0(const CharContext& ctx, double c) {
    if (!(c > 0.0)) throw DomainError("lambda0: requires c > 0");
    // The bracket [0, 2 b'(0)/c] always contains exactly one sign change:
    // chi0 is strictly decreasing in lambda.
    double hi = 2.0 * ctx.consts.bp0 / c;
    if (!(chi0(ctx, c, 0.0) > 0.0) || !(chi0(ctx, c, hi) < 0.0))
        throw NumericalError("lambda0: bracket lost its sign change");
    double lam = omega_r(ctx) / c;
    if (std::fabs(chi0(ctx, c, lam)) > 1e-10 * (1.0 + ctx.consts.bp0))
        throw NumericalError("lambda0: residual above tolerance");
    return lam;
}

double chik_lambda_max(const CharContext& ctx, double c) {
    // Beyond this the lambda^2 term dominates every other term by a factor 10.
    return 10.0 * (c + std::fabs(ctx.consts.bpk) + ctx.consts.dpk + 1.0) / ctx.a_kappa;
}

int count_chik_negative_roots(const CharContext& ctx, double c,
                              std::optional<double> extra_focus) {
    double lmax = chik_lambda_max(ctx, c);
    std::vector<double> grid;
    const int n = 8192;
    grid.reserve(n + 513);
    for (int i = 0; i <= n; ++i) grid.push_back(-lmax + (lmax - 1e-12) * i / n);
    if (extra_focus && *extra_focus < 0.0) {
        double l0 = *extra_focus;
        double w = std::max(1e-6, 0.5 * std::fabs(l0));
        for (int i = 0; i <= 512; ++i) {
            double l = l0 - w + 2.0 * w * i / 512;
            if (l < 0.0) grid.push_back(l);
        }
        std::sort(grid.begin(), grid.end());
    }
    int count = 0;
    double prev = chik(ctx, c, grid.front());
    for (std::size_t i = 1; i < grid.size(); ++i) {
        double cur = chik(ctx, c, grid[i]);
        if ((prev < 0.0 && cur >= 0.0) || (prev >= 0.0 && cur < 0.0)) ++count;
        prev = cur;
    }
    return count;
}

MuKappa mu_kappa(const CharContext& ctx) {
    double B = ctx.consts.bpk, E = ctx.consts.dpk;
    if (!(B < 0.0)) throw DomainError("mu_kappa: requires b'(kappa) < 0");
    auto g = [&](double w) { return B * std::exp(-w) * (2.0 + w) - 2.0 * E; };
    MuKappa out;
    // Theorem bracket (-40, -2); g(-2) = -2 d'(k) < 0 and g -> +inf as w -> -inf.
    double lo = -40.0;
    while (g(lo) < 0.0 && lo > -700.0) lo -= 40.0;
    out.omega_kappa = bisect_secant(g, lo, -2.0, 0.0, 1e-14);
    out.omega_in_expected_bracket = out.omega_kappa < -2.0;
    out.mu = std::sqrt(2.0 * ctx.a_kappa * out.omega_kappa / B) *
             std::exp(0.5 * out.omega_kappa);
    return out;
}

CKappaResult find_c_kappa(const CharContext& ctx) {
    CKappaResult res;
    double r = ctx.spec.delay;
    double B = ctx.consts.bpk, E = ctx.consts.dpk, A = ctx.a_kappa;
    if (!(B < 0.0)) {
        res.c = infinity();
        res.note = "monotone regime near kappa (b'(kappa) >= 0): c_kappa = +inf";
        return res;
    }
    if (r == 0.0) {
        res.c = infinity();
        res.note = "r = 0: chi_kappa keeps a negative real root for every c";
        return res;
    }

    auto fun = [&](double lam, double c, double& f1, double& f2) {
        double e = std::exp(-lam * c * r);
        f1 = A * lam * lam + B * e - c * lam - E;
        f2 = 2.0 * A * lam - c * r * B * e - c;
    };
    auto jac = [&](double lam, double c, double& j11, double& j12, double& j21, double& j22) {
        double e = std::exp(-lam * c * r);
        j11 = 2.0 * A * lam - c * r * B * e - c;
        j12 = -lam * r * B * e - lam;
        j21 = 2.0 * A + c * c * r * r * B * e;
        j22 = r * B * e * (lam * c * r - 1.0) - 1.0;
    };
    auto ok = [](double lam, double c) { return lam < 0.0 && c > 0.0; };

    MuKappa mk = mu_kappa(ctx);
    double c_seed = mk.mu / r;
    double lam_seed = mk.omega_kappa / (c_seed * r);
    const double scales[8] = {1.0, 0.5, 0.70710678, 0.84089642,
                              1.18920712, 1.41421356, 1.68179283, 2.0};
    for (double s : scales) {
        Newton2Result nr = newton2(fun, jac, lam_seed * s, c_seed,
                                   ok, 1e-13, 200);
        if (!nr.converged) continue;
        double lam = nr.x, c = nr.y;
        double rchi = std::fabs(chik(ctx, c, lam));
        double rdchi = std::fabs(chik_dlambda(ctx, c, lam));
        if (rchi > 1e-8 || rdchi > 1e-8) continue;
        int below = count_chik_negative_roots(ctx, 0.99 * c, lam);
        int above = count_chik_negative_roots(ctx, 1.01 * c, lam);
        if (below >= 2 && above == 0) {
            res.c = c;
            res.lambda_double = lam;
            res.residual_chi = rchi;
            res.residual_dchi = rdchi;
            res.verified = true;
            return res;
        }
    }
    res.c = infinity();
    res.note = "Newton seed ladder exhausted without a certified double root";
    return res;
}

double mu_star(const CharContext& ctx) {
    double B = ctx.consts.bpk, E = ctx.consts.dpk;
    if (!(B < 0.0)) throw DomainError("mu_star: requires b'(kappa) < 0");
    if (!(-B - E > 0.0)) throw DomainError("mu_star: requires b'(kappa) < -d'(kappa)");
    double pi = std::acos(-1.0);
    return pi * std::sqrt(ctx.a_kappa / (-B - E));
}

CStarResult find_c_star(const CharContext& ctx) {
    CStarResult res;
    double r = ctx.spec.delay;
    double B = ctx.consts.bpk, E = ctx.consts.dpk, A = ctx.a_kappa;
    if (!(B < 0.0)) {
        res.c = infinity();
        res.note = "monotone regime near kappa (b'(kappa) >= 0)";
        return res;
    }
    if (B >= -E) {
        res.c = infinity();
        res.note = "b'(kappa) >= -d'(kappa): no imaginary-axis crossing";
        return res;
    }
    if (r == 0.0) {
        res.c = infinity();
        res.note = "r = 0: no crossing frequency";
        return res;
    }

    // Crossing system: sigma from  -A sigma y^2 - E + B cos(ry) = 0  at the
    // frequencies y solving  y + B sin(ry) = 0  with y in (0, -B].
    double ycap = -B;
    auto g = [&](double y) { return y + B * std::sin(r * y); };
    double pi = std::acos(-1.0);
    int branches = static_cast<int>(std::ceil(r * (-B) / pi)) + 1;
    int n = std::max(8192, 256 * branches);
    double best_sigma = 0.0, best_y = 0.0;
    double prev_y = 1e-12 * ycap, prev_g = g(prev_y);
    for (int i = 1; i <= n; ++i) {
        double y = ycap * i / n;
        double cur = g(y);
        if ((prev_g < 0.0 && cur >= 0.0) || (prev_g > 0.0 && cur <= 0.0)) {
            double y_root = bisect_secant(g, prev_y, y, 0.0, 1e-14);
            double sigma = (B * std::cos(r * y_root) - E) / (A * y_root * y_root);
            if (sigma > best_sigma) {
                best_sigma = sigma;
                best_y = y_root;
            }
        }
        prev_y = y;
        prev_g = cur;
    }
    if (best_sigma <= 0.0) {
        res.c = infinity();
        res.note = "no sin branch produced sigma > 0";
        return res;
    }
    res.c = 1.0 / std::sqrt(best_sigma);
    res.sigma = best_sigma;
    res.y = best_y;
    return res;
}

double blowup_guard_speed(const CharContext& ctx) {
    const KineticsSpec& spec = ctx.spec;
    const DerivedConstants& dc = ctx.consts;
    double D = spec.diffusivity, m = spec.m;
    double phi_end = dc.zeta2 + 1.0;

    // Quasi-monotone modification of b: running supremum.
    auto btilde = [&](double s) {
        if (dc.monotone_birth || s <= dc.s_M) return birth(spec, s);
        return dc.M;
    };

    auto survives = [&](double c) {
        const int n = 8192;
        double phi0 = 1e-9 * phi_end;
        double psi = c * phi0;
        double h = (phi_end - phi0) / n;
        double phi = phi0;
        auto f = [&](double ph, double ps) {
            return c - D * m * std::pow(ph, m - 1.0) * (btilde(ph) - death(spec, ph)) / ps;
        };
        for (int i = 0; i < n; ++i) {
            double k1 = f(phi, psi);
            double k2 = f(phi + 0.5 * h, psi + 0.5 * h * k1);
            if (!(psi + 0.5 * h * k1 > 0.0)) return false;
            double k3 = f(phi + 0.5 * h, psi + 0.5 * h * k2);
            if (!(psi + 0.5 * h * k2 > 0.0)) return false;
            double k4 = f(phi + h, psi + h * k3);
            if (!(psi + h * k3 > 0.0)) return false;
            psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            phi += h;
            if (!(psi > 0.0) || !std::isfinite(psi)) return false;
        }
        return true;
    };

    double c = 0.25;
    for (int i = 0; i < 44; ++i) {
        if (survives(c)) return c;
        c *= 2.0;
    }
    throw ModelError("blowup_guard_speed: no blow-up speed found below the cap");
}

LowerBoundSpeed lower_bound_speed(const CharContext& ctx) {
    const KineticsSpec& spec = ctx.spec;
    const DerivedConstants& dc = ctx.consts;
    if (!dc.unimodal)
        throw DomainError("lower_bound_speed: requires unimodal kinetics");
    if (!(spec.delay > 0.0))
        throw DomainError("lower_bound_speed: requires r > 0");
    double D = spec.diffusivity, m = spec.m, r = spec.delay;

    LowerBoundSpeed out;

    // zeta3: right end of the maximal interval on which
    // phi^{m-1} (b - d) is increasing (the speed factor cancels).
    auto h = [&](double phi) {
        return std::pow(phi, m - 1.0) * (birth(spec, phi) - death(spec, phi));
    };
    const int ngrid = 4096;
    double zeta3 = dc.zeta1;
    {
        double prev = h(dc.zeta1 / ngrid);
        for (int i = 2; i <= ngrid; ++i) {
            double phi = dc.zeta1 * i / ngrid;
            double cur = h(phi);
            if (cur < prev) {
                zeta3 = dc.zeta1 * (i - 1) / ngrid;
                break;
            }
            prev = cur;
        }
    }
    out.zeta0 = std::min(dc.zeta1, zeta3);
    double z0 = out.zeta0;

    // eps: smallest grid point with
    //   int_0^eps phi^{m-1} d(phi) dphi < (1/4) int_eps^z0 phi^{m-1}(b-d) dphi
    auto integ_d = [&](double a, double b2) {
        return integrate([&](double s) { return std::pow(s, m - 1.0) * death(spec, s); },
                         a, b2, 1e-10 * std::max(1.0, b2 - a));
    };
    auto integ_bd = [&](double a, double b2) {
        return integrate(
            [&](double s) {
                return std::pow(s, m - 1.0) * (birth(spec, s) - death(spec, s));
            },
            a, b2, 1e-10 * std::max(1.0, b2 - a));
    };
    const int neps = 512;
    double eps = 0.0;
    for (int j = 1; j < neps; ++j) {
        double cand = z0 * j / neps;
        if (integ_d(0.0, cand) < 0.25 * integ_bd(cand, z0)) {
            eps = cand;
            break;
        }
    }
    if (eps == 0.0)
        throw ModelError("lower_bound_speed: bound vacuous (zeta0 at the grid floor)");
    out.eps = eps;

    // delta = inf of b - d on (eps, zeta0)
    double delta = infinity();
    for (int i = 0; i <= 2048; ++i) {
        double phi = eps + (z0 - eps) * i / 2048;
        delta = std::min(delta, birth(spec, phi) - death(spec, phi));
    }
    if (!(delta > 0.0))
        throw ModelError("lower_bound_speed: b - d not positive on (eps, zeta0)");
    out.delta = delta;

    // C1: sup of psi1/phi for  dpsi/dphi = cbar + D m phi^{m-1} d(phi)/psi,
    // with the provisional cap cbar = 2 x blow-up guard.
    double cbar = 2.0 * blowup_guard_speed(ctx);
    out.cbar = cbar;
    double C1 = cbar;
    {
        const int n = 8192;
        double phi0 = 1e-8 * z0;
        double psi = cbar * phi0;
        double step = (z0 - phi0) / n;
        double phi = phi0;
        auto f = [&](double ph, double ps) {
            return cbar + D * m * std::pow(ph, m - 1.0) * death(spec, ph) / ps;
        };
        for (int i = 0; i < n; ++i) {
            double k1 = f(phi, psi);
            double k2 = f(phi + 0.5 * step, psi + 0.5 * step * k1);
            double k3 = f(phi + 0.5 * step, psi + 0.5 * step * k2);
            double k4 = f(phi + step, psi + step * k3);
            psi += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            phi += step;
            C1 = std::max(C1, psi / phi);
        }
    }
    out.C1 = C1;

    // Modulus of continuity of s -> s^{1/(m-1)} on [(eps/2)^{m-1}, z0^{m-1}].
    double s_lo = std::pow(0.5 * eps, m - 1.0);
    double s_hi = std::pow(z0, m - 1.0);
    auto fpow = [&](double s) { return std::pow(s, 1.0 / (m - 1.0)); };
    auto omega = [&](double hstep) {
        double best = 0.0;
        for (int i = 0; i <= 2048; ++i) {
            double s = s_lo + (s_hi - s_lo) * i / 2048;
            double s2 = std::min(s + hstep, s_hi);
            best = std::max(best, fpow(s2) - fpow(s));
        }
        if (hstep >= s_hi - s_lo) best = fpow(s_hi) - fpow(s_lo);
        return best;
    };

    double supbp = 0.0;
    for (int i = 0; i <= 2048; ++i) {
        double s = z0 * i / 2048;
        supbp = std::max(supbp, birth_prime(spec, s));
    }

    // c1: largest speed with  sup b' * omega(C1 (m-1) c1 r / (D m)) <= delta/2.
    auto cond = [&](double c) {
        return supbp * omega(C1 * (m - 1.0) * c * r / (D * m)) - 0.5 * delta;
    };
    double c1;
    if (cond(cbar) <= 0.0) {
        c1 = cbar;
    } else {
        double lo = 0.0, hi = cbar;
        for (int i = 0; i < 200 && hi - lo > 1e-12 * cbar; ++i) {
            double mid = 0.5 * (lo + hi);
            if (cond(mid) <= 0.0) lo = mid;
            else hi = mid;
        }
        c1 = lo;
    }
    out.c1 = c1;

    // c2 from  c2 C1 z0^2 / 2 < (1/4) int_eps^z0 D m phi^{m-1}(b-d) dphi.
    double J = D * m * integ_bd(eps, z0);
    out.c2 = (0.25 * J) / (0.5 * C1 * z0 * z0) * (1.0 - 1e-9);

    out.cdot = std::min(out.c1, out.c2);
    out.mu0 = out.c1 * r;
    if (!(out.cdot > 0.0))
        throw ModelError("lower_bound_speed: bound degenerated to zero");
    return out;
}

SpeedThresholds compute_thresholds(const CharContext& ctx) {
    SpeedThresholds th;
    th.c_kappa = find_c_kappa(ctx).c;
    th.c_star = find_c_star(ctx).c;
    if (ctx.consts.bpk < 0.0) {
        MuKappa mk = mu_kappa(ctx);
        th.mu_kappa = mk.mu;
        th.omega_kappa = mk.omega_kappa;
        if (ctx.consts.bpk < -ctx.consts.dpk) th.mu_star = mu_star(ctx);
    }
    if (ctx.consts.unimodal && ctx.spec.delay > 0.0) {
        LowerBoundSpeed lb = lower_bound_speed(ctx);
        th.cdot = lb.cdot;
        th.mu0 = lb.mu0;
    }
    return th;
}

} // namespace degwave

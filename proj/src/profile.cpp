#include "degwave/profile.hpp"

#include <algorithm>
#include <cmath>

#include "degwave/quadrature.hpp"
#include "degwave/rootfind.hpp"

namespace degwave {

namespace {

constexpr double kTinyDenom = 1e-300;

struct EdgeBootstrap {
    double t_boot = 0.0;
    double coeff = 0.0;  // phi = (coeff * t)^{exponent}
    double exponent = 0.0;
};

double boot_phi(const EdgeBootstrap& eb, double t) {
    return std::pow(eb.coeff * t, eb.exponent);
}

} // namespace

double WaveProfile::phi(double t) const {
    if (start_kind == StartKind::Sharp) {
        if (t <= 0.0) return 0.0;
        if (t <= t_boot) return std::pow(edge_coeff * t, edge_exp);
    } else {
        if (t <= (traj.empty() ? 0.0 : traj.t_begin()))
            return smooth_amplitude * std::exp(smooth_rate * t);
    }
    if (traj.empty()) return std::pow(edge_coeff * std::min(t, t_boot), edge_exp);
    if (t >= traj.t_end()) return traj.eval(traj.t_end())[0];
    return traj.eval(t)[0];
}

double WaveProfile::psi(double t) const {
    if (start_kind == StartKind::Sharp) {
        if (t <= 0.0) return 0.0;
        if (t <= t_boot) return speed * phi(t);  // psi = c phi + o(phi) at the edge
    } else {
        if (t <= (traj.empty() ? 0.0 : traj.t_begin())) {
            // psi = D m phi^{m-1} phi' with phi' = rate * phi on the ansatz
            double p = phi(t);
            return diffusivity * m * smooth_rate * std::pow(p, m);
        }
    }
    if (traj.empty()) return speed * phi(t);
    if (t >= traj.t_end()) return traj.eval(traj.t_end())[1];
    return traj.eval(t)[1];
}

const char* outcome_name(const TrajectoryOutcome& outcome) {
    if (std::holds_alternative<DecayedToZero>(outcome)) return "DecayedToZero";
    if (std::holds_alternative<Blowup>(outcome)) return "Blowup";
    return "Persistent";
}

namespace {

// Right-hand side of the phase system
//   phi' = psi / (D m phi^{m-1})
//   psi' = c psi / (D m phi^{m-1}) + d(phi) - forcing(t)
// with the delayed forcing supplied by the caller.
struct PhaseRHS {
    const KineticsSpec* spec;
    double c;
    std::function<double(double, double)> forcing;  // (t, phi_now) -> b(...)

    State2 operator()(double t, State2 y) const {
        double phi = y[0] > 0.0 ? y[0] : 0.0;
        double denom = spec->diffusivity * spec->m * std::pow(phi, spec->m - 1.0);
        if (denom < kTinyDenom) denom = kTinyDenom;
        double slope = y[1] / denom;
        return State2{slope, c * slope + death(*spec, phi) - forcing(t, phi)};
    }
};

// Choose t_boot so the correction neglected by the closed-form leading term,
// estimated by integrating one halving step, stays below 1e-10 * phi(t_boot).
EdgeBootstrap make_bootstrap(const CharContext& ctx, double c, double t_cap) {
    const KineticsSpec& spec = ctx.spec;
    double m = spec.m, D = spec.diffusivity;
    EdgeBootstrap eb;
    eb.coeff = (m - 1.0) * c / (D * m);
    eb.exponent = 1.0 / (m - 1.0);

    // analytic scale of the first neglected term (reaction over transport)
    double react = ctx.consts.dp0 + death(spec, ctx.consts.zeta1) /
                                        std::max(ctx.consts.zeta1, 1e-12) + 1.0;
    double guess = 1e-8 * c / ((m - 1.0) * react);
    eb.t_boot = std::min(guess, 0.25 * t_cap);

    PhaseRHS rhs{&spec, c, [](double, double) { return 0.0; }};
    StepControl trial;
    trial.rtol = 1e-12;
    trial.atol = 0.0;
    for (int it = 0; it < 80; ++it) {
        double tb = eb.t_boot;
        double ta = 0.5 * tb;
        State2 y{boot_phi(eb, ta), c * boot_phi(eb, ta)};
        trial.h_init = 0.05 * ta;
        double phi_end = y[0];
        bool ok = integrate_ode45(
            rhs, ta, y, tb, trial, nullptr,
            [&](double, const State2& yy, const State2&) {
                phi_end = yy[0];
                return StepAction::Continue;
            });
        double ref = boot_phi(eb, tb);
        if (ok && std::fabs(phi_end - ref) <= 1e-10 * ref) break;
        eb.t_boot *= 0.5;
        if (eb.t_boot < 1e-280)
            throw NumericalError("first_segment: bootstrap interval underflow");
    }
    return eb;
}

enum class RunStop { None, Decayed, Escaped };

struct RunState {
    double t = 0.0;
    State2 y{0.0, 0.0};
    RunStop stop = RunStop::None;
    double t_stop = 0.0;
};

// Advance the state to t_target, appending dense pieces, honoring the
// decay/escape guards on every accepted step.
void advance_to(const PhaseRHS& rhs, RunState& st, double t_target,
                const StepControl& ctl, const IntegrationGuards& guards,
                DenseTrajectory* out) {
    if (st.t >= t_target || st.stop != RunStop::None) return;
    StepControl c2 = ctl;
    c2.h_init = std::min(ctl.h_init, 0.25 * (t_target - st.t));
    bool done = integrate_ode45(
        rhs, st.t, st.y, t_target, c2, out,
        [&](double t, const State2& y, const State2&) {
            st.t = t;
            st.y = y;
            if (y[0] >= guards.escape) {
                st.stop = RunStop::Escaped;
                st.t_stop = t;
                return StepAction::Stop;
            }
            if (y[0] <= guards.floor && y[1] <= 0.0) {
                st.stop = RunStop::Decayed;
                st.t_stop = t;
                return StepAction::Stop;
            }
            return StepAction::Continue;
        });
    if (!done && st.stop == RunStop::None) {
        // step-size underflow: a degenerate touch-down terminates the run
        if (st.y[1] <= 0.0) {
            st.stop = RunStop::Decayed;
            st.t_stop = st.t;
        } else {
            throw NumericalError("profile integration: step underflow away from touch-down");
        }
    }
}

// The sharp edge needs resolved dense output across many decades of t; march
// in geometric chunks with the step size capped relative to the chunk start.
void advance_geometric(const PhaseRHS& rhs, RunState& st, double t_target,
                       const StepControl& ctl, const IntegrationGuards& guards,
                       DenseTrajectory* out) {
    while (st.t < t_target && st.stop == RunStop::None) {
        double chunk_end = std::min(t_target, 2.0 * st.t);
        StepControl c2 = ctl;
        c2.h_max = 0.2 * st.t;
        c2.h_init = std::min(0.05 * st.t, 0.25 * (chunk_end - st.t));
        advance_to(rhs, st, chunk_end, c2, guards, out);
    }
}

IntegrationGuards resolve_guards(const CharContext& ctx, const IntegrateOptions& opts) {
    IntegrationGuards g = opts.guards;
    if (g.escape <= 0.0)
        g.escape = ctx.consts.zeta2 + std::max(1.0, ctx.consts.zeta2);
    return g;
}

// At small phi the degenerate diffusion term D(phi^m)'' is asymptotically
// negligible (which is why chi_0 carries no diffusion term), while in the
// full second-order formulation it contributes a spurious fast mode of rate
// c/(D m phi^{m-1}) that amplifies any tail-ansatz error beyond recovery.
// The smooth leading edge is therefore marched with the first-order
// reduction c phi' = -d(phi) + b(phi(t-cr)) plus the diffusion term
// evaluated quasi-statically from the reduced field (one corrective
// iterate, residual O(eps^2) with eps = D m^2 lambda phi^{m-1}/c), and the
// full system takes over once phi is large enough that the fast mode is no
// longer a hazard.
struct SmoothEdge {
    std::vector<double> time, phi, slope;
    bool stalled = false;       // reduced field turned nonpositive
    double t_stall = 0.0;
    double psi_handoff = 0.0;   // flux at the last point
};

SmoothEdge integrate_smooth_edge(const CharContext& ctx, double c, double amplitude,
                                 double rate, double phi_handoff, double t_cap) {
    const KineticsSpec& spec = ctx.spec;
    double m = spec.m, D = spec.diffusivity;
    double cr = c * spec.delay;

    SmoothEdge edge;
    edge.time.push_back(0.0);
    edge.phi.push_back(amplitude);

    auto hist_at = [&](double tau, double& value, double& deriv) {
        if (tau <= 0.0) {
            value = amplitude * std::exp(rate * tau);
            deriv = rate * value;
            return;
        }
        auto it = std::lower_bound(edge.time.begin(), edge.time.end(), tau);
        std::size_t i = it == edge.time.begin()
                            ? 1
                            : static_cast<std::size_t>(it - edge.time.begin());
        i = std::min(i, edge.time.size() - 1);
        double w = (tau - edge.time[i - 1]) / (edge.time[i] - edge.time[i - 1]);
        value = edge.phi[i - 1] + w * (edge.phi[i] - edge.phi[i - 1]);
        deriv = (edge.phi[i] - edge.phi[i - 1]) / (edge.time[i] - edge.time[i - 1]);
    };

    // reduced field with one quasi-static diffusion iterate
    auto reduced_slope = [&](double t, double phiv) {
        double h, hp;
        if (cr > 0.0) {
            hist_at(t - cr, h, hp);
        } else {
            h = phiv;
            hp = 0.0;  // replaced below once F0 is known
        }
        double F0 = (birth(spec, h) - death(spec, phiv)) / c;
        if (cr == 0.0) hp = F0;
        double F0p = (birth_prime(spec, h) * hp - death_prime(spec, phiv) * F0) / c;
        double diff = D * (m * (m - 1.0) * std::pow(phiv, m - 2.0) * F0 * F0 +
                           m * std::pow(phiv, m - 1.0) * F0p);
        return F0 + diff / c;
    };

    double dt = std::min(0.02 / std::max(rate, 1e-6), cr > 0.0 ? cr / 64.0 : 1e30);
    dt = std::min(dt, t_cap / 64.0);
    double t = 0.0, phiv = amplitude;
    double last_slope = reduced_slope(0.0, amplitude);
    edge.slope.push_back(last_slope);
    while (phiv < phi_handoff && t < t_cap) {
        double k1 = reduced_slope(t, phiv);
        double k2 = reduced_slope(t + 0.5 * dt, phiv + 0.5 * dt * k1);
        double k3 = reduced_slope(t + 0.5 * dt, phiv + 0.5 * dt * k2);
        double k4 = reduced_slope(t + dt, phiv + dt * k3);
        double next = phiv + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
        if (!(next > 0.0) || !std::isfinite(next)) {
            edge.stalled = true;
            edge.t_stall = t;
            break;
        }
        phiv = next;
        last_slope = reduced_slope(t, phiv);
        edge.time.push_back(t);
        edge.phi.push_back(phiv);
        edge.slope.push_back(last_slope);
    }
    if (!edge.stalled && phiv < phi_handoff) {
        // never reached the handoff level within the cap: treat as a stall
        edge.stalled = true;
        edge.t_stall = t;
    }
    edge.psi_handoff = D * m * std::pow(phiv, m - 1.0) * last_slope;
    return edge;
}

// Convert the reduced edge into dense Hermite pieces in t (flux from the
// reduced slope).
void append_edge_pieces(const CharContext& ctx, const SmoothEdge& edge,
                        DenseTrajectory* out) {
    const KineticsSpec& spec = ctx.spec;
    double m = spec.m, D = spec.diffusivity;
    auto state_at = [&](std::size_t i) {
        double phiv = edge.phi[i];
        double psiv = D * m * std::pow(phiv, m - 1.0) * edge.slope[i];
        return State2{phiv, psiv};
    };
    auto deriv_at = [&](std::size_t i) {
        double dpsi;
        if (i + 1 < edge.phi.size()) {
            double ps0 = state_at(i)[1], ps1 = state_at(i + 1)[1];
            dpsi = (ps1 - ps0) / (edge.time[i + 1] - edge.time[i]);
        } else {
            double ps0 = state_at(i - 1)[1], ps1 = state_at(i)[1];
            dpsi = (ps1 - ps0) / (edge.time[i] - edge.time[i - 1]);
        }
        return State2{edge.slope[i], dpsi};
    };
    for (std::size_t i = 0; i + 1 < edge.phi.size(); ++i) {
        HermitePiece p;
        p.t0 = edge.time[i];
        p.t1 = edge.time[i + 1];
        p.y0 = state_at(i);
        p.y1 = state_at(i + 1);
        p.f0 = deriv_at(i);
        p.f1 = deriv_at(i + 1);
        out->pieces.push_back(p);
    }
}

} // namespace

WaveProfile first_segment(const CharContext& ctx, double c, double t_end) {
    if (!(c > 0.0)) throw DomainError("first_segment: requires c > 0");
    double cr = c * ctx.spec.delay;
    if (ctx.spec.delay > 0.0 && t_end > cr * (1.0 + 1e-12))
        throw DomainError("first_segment: t_end beyond the delay-free window");

    WaveProfile prof;
    prof.speed = c;
    prof.cr = cr;
    prof.m = ctx.spec.m;
    prof.diffusivity = ctx.spec.diffusivity;
    prof.start_kind = WaveProfile::StartKind::Sharp;

    EdgeBootstrap eb = make_bootstrap(ctx, c, t_end);
    prof.t_boot = eb.t_boot;
    prof.edge_coeff = eb.coeff;
    prof.edge_exp = eb.exponent;

    PhaseRHS rhs{&ctx.spec, c, [](double, double) { return 0.0; }};
    RunState st;
    st.t = eb.t_boot;
    st.y = State2{boot_phi(eb, eb.t_boot), c * boot_phi(eb, eb.t_boot)};

    IntegrationGuards guards;
    guards.escape = ctx.consts.zeta2 + std::max(1.0, ctx.consts.zeta2);
    StepControl ctl;
    advance_geometric(rhs, st, t_end, ctl, guards, &prof.traj);
    if (st.stop == RunStop::Decayed)
        throw NumericalError("first_segment: could not leave the origin");
    prof.segments.push_back(SegmentInfo{0.0, st.t, prof.traj.pieces.size()});
    prof.edge = fit_edge(ctx, prof);
    return prof;
}

std::pair<TrajectoryOutcome, WaveProfile> integrate_full(const CharContext& ctx, double c,
                                                         const StartMode& start,
                                                         double horizon,
                                                         const IntegrateOptions& opts) {
    if (!(c > 0.0)) throw DomainError("integrate: requires c > 0");
    if (!(horizon > 0.0)) throw ParamError("integrate: horizon must be > 0");
    double r = ctx.spec.delay;
    double cr = c * r;
    if (r > 0.0 && horizon < 20.0 * cr)
        throw ParamError("integrate: horizon shorter than 20 delay windows");

    WaveProfile prof;
    prof.speed = c;
    prof.cr = cr;
    prof.m = ctx.spec.m;
    prof.diffusivity = ctx.spec.diffusivity;

    IntegrationGuards guards = resolve_guards(ctx, opts);
    StepControl ctl;
    ctl.rtol = opts.rtol;
    ctl.atol = opts.atol;

    PhaseRHS rhs{&ctx.spec, c, nullptr};
    RunState st;

    const bool sharp = std::holds_alternative<SharpStart>(start);
    if (sharp) {
        prof.start_kind = WaveProfile::StartKind::Sharp;
        EdgeBootstrap eb = make_bootstrap(ctx, c, cr > 0.0 ? cr : horizon);
        prof.t_boot = eb.t_boot;
        prof.edge_coeff = eb.coeff;
        prof.edge_exp = eb.exponent;
        st.t = eb.t_boot;
        st.y = State2{boot_phi(eb, eb.t_boot), c * boot_phi(eb, eb.t_boot)};
    } else {
        const auto& sm = std::get<SmoothTailStart>(start);
        if (!(sm.amplitude > 0.0) || sm.amplitude > ctx.consts.zeta1 / 10.0)
            throw ParamError("integrate: smooth-tail amplitude outside (0, zeta1/10]");
        prof.start_kind = WaveProfile::StartKind::Smooth;
        prof.smooth_amplitude = sm.amplitude;
        prof.smooth_rate = lambda0(ctx, c);

        // Reduced march of the leading edge while the diffusion correction is
        // a small fraction of the transport balance; the full system takes
        // over at the handoff level.
        double m = ctx.spec.m, D = ctx.spec.diffusivity;
        double eps_cap = 0.05;
        double phi_handoff =
            std::pow(eps_cap * c / (D * m * m * prof.smooth_rate), 1.0 / (m - 1.0));
        phi_handoff = std::clamp(phi_handoff, 2.0 * sm.amplitude, 0.75 * ctx.consts.kappa);
        SmoothEdge se = integrate_smooth_edge(ctx, c, sm.amplitude, prof.smooth_rate,
                                              phi_handoff, horizon);
        append_edge_pieces(ctx, se, &prof.traj);
        if (se.stalled) {
            prof.segments.push_back(SegmentInfo{0.0, se.t_stall, prof.traj.pieces.size()});
            return {TrajectoryOutcome{DecayedToZero{se.t_stall}}, std::move(prof)};
        }
        st.t = se.time.back();
        st.y = State2{se.phi.back(), se.psi_handoff};
        prof.segments.push_back(SegmentInfo{0.0, st.t, prof.traj.pieces.size()});
    }

    // Delayed forcing from the stored history (method of steps); r = 0 uses
    // the instantaneous value so the run is a plain ODE.
    if (cr > 0.0) {
        rhs.forcing = [&prof, &ctx](double t, double) {
            return birth(ctx.spec, prof.phi(t - prof.cr));
        };
    } else {
        rhs.forcing = [&ctx](double, double phi_now) {
            return birth(ctx.spec, phi_now > 0.0 ? phi_now : 0.0);
        };
    }

    // March segment by segment so steps never straddle a forcing kink.
    double seg_lo = sharp ? 0.0 : st.t;
    while (st.t < horizon && st.stop == RunStop::None) {
        double seg_end = horizon;
        if (cr > 0.0) {
            double k = std::floor(st.t / cr + 1e-12) + 1.0;
            seg_end = std::min(horizon, k * cr);
        }
        std::size_t pieces_before = prof.traj.pieces.size();
        if (sharp && st.t < 64.0 * prof.t_boot)
            advance_geometric(rhs, st, seg_end, ctl, guards, &prof.traj);
        else
            advance_to(rhs, st, seg_end, ctl, guards, &prof.traj);
        prof.segments.push_back(
            SegmentInfo{seg_lo, st.t, prof.traj.pieces.size() - pieces_before});
        seg_lo = st.t;
    }

    if (sharp) prof.edge = fit_edge(ctx, prof);

    if (st.stop == RunStop::Decayed)
        return {TrajectoryOutcome{DecayedToZero{st.t_stop}}, std::move(prof)};
    if (st.stop == RunStop::Escaped)
        return {TrajectoryOutcome{Blowup{st.t_stop}}, std::move(prof)};

    double window = opts.tail_window;
    if (window <= 0.0) window = r > 0.0 ? 5.0 * cr : horizon / 10.0;
    TailReport tail = classify_tail_series(
        [&prof](double t) { return prof.phi(t); },
        prof.traj.t_begin(), horizon, window, ctx.consts.kappa);
    Persistent p;
    p.tail = tail;
    p.profile = prof;
    return {TrajectoryOutcome{std::move(p)}, std::move(prof)};
}

TrajectoryOutcome integrate(const CharContext& ctx, double c, const StartMode& start,
                            double horizon, const IntegrateOptions& opts) {
    return integrate_full(ctx, c, start, horizon, opts).first;
}

TailReport classify_tail(const WaveProfile& profile, double window, double kappa) {
    if (profile.cr > 0.0 && window < 5.0 * profile.cr)
        throw ParamError("classify_tail: window must be >= 5 cr");
    return classify_tail_series([&profile](double t) { return profile.phi(t); },
                                profile.traj.t_begin(), profile.traj.t_end(),
                                window, kappa);
}

EdgeAsymptotics fit_edge(const CharContext& ctx, const WaveProfile& profile) {
    EdgeAsymptotics ea;
    double m = ctx.spec.m;
    ea.exponent_theory = 1.0 / (m - 1.0);
    ea.coeff_theory = std::pow(profile.edge_coeff, ea.exponent_theory);

    if (profile.traj.empty()) return ea;
    double t_first = profile.segments.empty() ? profile.traj.t_end()
                                              : profile.segments.front().t_hi;

    // Fit window chosen by phi level: high enough to clear integrator noise,
    // low enough that the reaction correction stays negligible.
    double phi_first = profile.phi(0.5 * t_first);
    double phi_hi = std::min(0.01 * ctx.consts.kappa, 0.5 * phi_first);
    double phi_lo = std::max(1e-3 * phi_hi, 1e-9);
    if (!(phi_hi > phi_lo)) {
        phi_hi = phi_first;
        phi_lo = 0.01 * phi_hi;
    }
    auto t_of_phi = [&](double target) {
        double lo = profile.t_boot, hi = 0.5 * t_first;
        for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
            double mid = 0.5 * (lo + hi);
            if (profile.phi(mid) < target) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    double t_lo = std::max(t_of_phi(phi_lo), 1.5 * profile.t_boot);
    double t_hi = std::max(t_of_phi(phi_hi), 4.0 * t_lo);

    const int n = 64;
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> lx(n), ly(n);
    for (int i = 0; i < n; ++i) {
        double t = t_lo * std::pow(t_hi / t_lo, double(i) / (n - 1));
        double x = std::log(t);
        double y = std::log(std::max(profile.phi(t), 1e-300));
        lx[i] = x; ly[i] = y;
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    double intercept = (sy - slope * sx) / n;
    ea.exponent_fit = slope;
    // log phi = p log t + p log a  ->  coefficient a^p = e^{intercept}
    ea.coeff_fit = std::exp(intercept);
    double resid = 0.0;
    for (int i = 0; i < n; ++i)
        resid = std::max(resid, std::fabs(ly[i] - slope * lx[i] - intercept));
    ea.fit_residual = resid;
    return ea;
}

LeftTailFit fit_left_tail(const CharContext& ctx, const WaveProfile& profile) {
    if (profile.start_kind != WaveProfile::StartKind::Smooth)
        throw DomainError("fit_left_tail: requires a smooth-start profile");
    LeftTailFit fit;
    double A = profile.smooth_amplitude;
    double phi_cap = std::min(10.0 * A, 0.5 * ctx.consts.zeta1);

    double t0 = profile.traj.t_begin();
    // shrink to the interval before the first crossing of the cap
    double hi = profile.traj.t_end();
    for (const auto& p : profile.traj.pieces) {
        if (p.y1[0] >= phi_cap) {
            double lo = p.t0, hh = p.t1;
            for (int i = 0; i < 100 && hh - lo > 1e-12 * (1.0 + hh); ++i) {
                double mid = 0.5 * (lo + hh);
                if (profile.phi(mid) < phi_cap) lo = mid;
                else hh = mid;
            }
            hi = lo;
            break;
        }
    }
    const int n = 256;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> ts(n), ys(n);
    for (int i = 0; i < n; ++i) {
        double t = t0 + (hi - t0) * i / (n - 1);
        double y = std::log(std::max(profile.phi(t), 1e-300));
        ts[i] = t; ys[i] = y;
        sx += t; sy += y; sxx += t * t; sxy += t * y;
    }
    fit.lambda = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.C1 = std::exp((sy - fit.lambda * sx) / n);
    double resid_log = 0.0;
    // correction-bound fit on the residual |phi - C1 e^{lambda t}|
    double rx = 0, ry = 0, rxx = 0, rxy = 0;
    int cnt = 0;
    for (int i = 0; i < n; ++i) {
        double model = fit.C1 * std::exp(fit.lambda * ts[i]);
        double resid = std::fabs(profile.phi(ts[i]) - model);
        resid_log = std::max(resid_log,
                             std::fabs(ys[i] - std::log(fit.C1) - fit.lambda * ts[i]));
        if (resid > 1e-14 * model) {
            double lr = std::log(resid);
            rx += ts[i]; ry += lr; rxx += ts[i] * ts[i]; rxy += ts[i] * lr;
            ++cnt;
        }
    }
    fit.fit_residual = resid_log;
    if (cnt >= 4) {
        fit.Lambda = (cnt * rxy - rx * ry) / (cnt * rxx - rx * rx);
        fit.C2 = std::exp((ry - fit.Lambda * rx) / cnt);
    } else {
        fit.Lambda = fit.lambda;
        fit.C2 = 0.0;
    }
    return fit;
}

EdgeRegularity edge_regularity(const CharContext& ctx, double c) {
    if (!(ctx.spec.m > 1.0)) throw DomainError("edge_regularity: requires m > 1");
    EdgeRegularity er;
    double m = ctx.spec.m;
    er.is_c1 = m < 2.0;
    if (m == 2.0) er.theory_derivative = c / (ctx.spec.diffusivity * m);
    else if (m < 2.0) er.theory_derivative = 0.0;
    else er.theory_derivative = infinity();

    double cr = c * ctx.spec.delay;
    double t_end = cr > 0.0 ? std::min(cr, 0.25) : 0.25;
    WaveProfile seg = first_segment(ctx, c, t_end);
    double tp = std::max(4.0 * seg.t_boot, 1e-7);
    er.measured_derivative =
        (seg.phi(1.01 * tp) - seg.phi(0.99 * tp)) / (0.02 * tp);
    return er;
}

double phase_delay_functional(const CharContext& ctx, const WaveProfile& profile,
                              double phi_value) {
    const KineticsSpec& spec = ctx.spec;
    double m = spec.m, D = spec.diffusivity;
    double cr = profile.cr;
    if (cr == 0.0) return phi_value;

    // locate the end of the monotone leading edge (first nonpositive flux)
    double t_peak = profile.traj.t_end();
    for (const auto& p : profile.traj.pieces) {
        if (p.y1[1] <= 0.0) {
            t_peak = p.t1;
            break;
        }
    }
    double phi_peak = profile.phi(t_peak);
    if (!(phi_value > 0.0) || phi_value > phi_peak)
        throw DomainError("phase_delay_functional: phi outside the monotone leading edge");

    auto t_of_phi = [&](double target) {
        double lo = 0.0, hi = t_peak;
        for (int i = 0; i < 200 && hi - lo > 1e-14 * (1.0 + hi); ++i) {
            double mid = 0.5 * (lo + hi);
            if (profile.phi(mid) < target) lo = mid;
            else hi = mid;
        }
        return 0.5 * (lo + hi);
    };
    double t_phi = t_of_phi(phi_value);
    if (t_phi <= cr) return 0.0;  // the whole history is pre-edge

    // time-to-go integral in the regularized variable x = s^{m-1}
    double q = 1.0 / (m - 1.0);
    auto psi_of_phi = [&](double s) {
        double t = t_of_phi(s);
        return std::max(profile.psi(t), kTinyDenom);
    };
    auto integrand = [&](double x) {
        double s = std::pow(x, q);
        return D * m * q * std::pow(x, q) / psi_of_phi(s);
    };
    double x_hi = std::pow(phi_value, m - 1.0);
    auto time_from = [&](double theta) {
        double x_lo = std::pow(theta, m - 1.0);
        return integrate(integrand, x_lo, x_hi, 1e-11 * std::max(1.0, cr));
    };

    double lo = 0.0, hi = phi_value;
    for (int i = 0; i < 100 && hi - lo > 1e-11 * phi_value; ++i) {
        double mid = 0.5 * (lo + hi);
        if (time_from(mid) > cr) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace degwave

#include "degwave/shooting.hpp"

#include <algorithm>
#include <cmath>

namespace degwave {

namespace {

bool decayed(const TrajectoryOutcome& o) {
    return std::holds_alternative<DecayedToZero>(o);
}
bool blew_up(const TrajectoryOutcome& o) {
    return std::holds_alternative<Blowup>(o);
}

double seed_speed(const CharContext& ctx) {
    if (ctx.consts.unimodal && ctx.spec.delay > 0.0)
        return 2.0 * lower_bound_speed(ctx).cdot;
    // delay-free or non-unimodal models: classical linear-spread scale
    double gap = std::max(ctx.consts.bp0 - ctx.consts.dp0, 1.0);
    return std::sqrt(ctx.spec.diffusivity * gap);
}

} // namespace

TrajectoryOutcome probe_outcome(const CharContext& ctx, double c,
                                const ShootingOptions& opts,
                                std::vector<ProbeRecord>* log) {
    double cr = c * ctx.spec.delay;
    double horizon = opts.horizon_factor * std::max(cr, 1.0);
    IntegrateOptions io = opts.integrate;
    TrajectoryOutcome out = integrate(ctx, c, SharpStart{}, horizon, io);
    for (int j = 0; j < opts.max_horizon_doublings; ++j) {
        TrajectoryOutcome out2 = integrate(ctx, c, SharpStart{}, 2.0 * horizon, io);
        bool stable = outcome_name(out) == std::string(outcome_name(out2));
        out = std::move(out2);
        horizon *= 2.0;
        if (stable) break;
    }
    if (log) log->push_back(ProbeRecord{c, horizon, outcome_name(out)});
    return out;
}

std::pair<double, double> find_guards(const CharContext& ctx,
                                      const ShootingOptions& opts,
                                      std::vector<ProbeRecord>* log) {
    double seed = seed_speed(ctx);

    double c_lo = 0.0;
    double first_nondecay = -1.0;
    {
        double c = seed;
        bool found = false;
        for (int j = 0; j < 60; ++j) {
            TrajectoryOutcome o = probe_outcome(ctx, c, opts, log);
            if (decayed(o)) {
                c_lo = c;
                found = true;
                break;
            }
            if (first_nondecay < 0.0) first_nondecay = c;
            c *= 0.5;
        }
        if (!found)
            throw ModelError("find_guards: no decaying speed above the machine floor");
    }

    double c_hi = 0.0;
    {
        double c = first_nondecay > 0.0 ? first_nondecay : 2.0 * c_lo;
        bool found = false;
        for (int j = 0; j < 60; ++j) {
            if (c > 1e3 * std::max(seed, 1.0)) break;
            TrajectoryOutcome o = probe_outcome(ctx, c, opts, log);
            if (blew_up(o)) {
                c_hi = c;
                found = true;
                break;
            }
            c *= 2.0;
        }
        if (!found)
            throw ModelError("find_guards: no blowing-up speed below the cap");
    }
    return {c_lo, c_hi};
}

ShootingResult find_sharp_speed(const CharContext& ctx, double tol, ShootingOptions opts) {
    if (!(tol > 0.0)) throw ParamError("find_sharp_speed: tol must be > 0");
    opts.tol = tol;
    ShootingResult res;
    auto [c_lo, c_hi] = find_guards(ctx, opts, &res.probes);
    res.guard_lo = c_lo;
    res.guard_hi = c_hi;

    double lo = c_lo, hi = c_hi;
    int iters = 0;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        TrajectoryOutcome o = probe_outcome(ctx, mid, opts, &res.probes);
        if (decayed(o)) lo = mid;
        else hi = mid;
        ++iters;
        if (iters > 200) break;
    }
    res.iterations = iters;
    res.bracket_width = hi - lo;
    res.c0 = 0.5 * (lo + hi);

    // Scan the probe log for decay/non-decay inversions; the predicate is
    // assumed monotone within the bracket but that is not guaranteed.
    {
        std::vector<ProbeRecord> sorted = res.probes;
        std::sort(sorted.begin(), sorted.end(),
                  [](const ProbeRecord& a, const ProbeRecord& b) { return a.c < b.c; });
        for (std::size_t i = 1; i < sorted.size(); ++i) {
            bool prev_decay = std::string(sorted[i - 1].outcome) == "DecayedToZero";
            bool cur_decay = std::string(sorted[i].outcome) == "DecayedToZero";
            if (prev_decay != cur_decay)
                res.sign_change_brackets.emplace_back(sorted[i - 1].c, sorted[i].c);
        }
        res.monotone_predicate = res.sign_change_brackets.size() <= 1;
        if (!res.monotone_predicate && !res.sign_change_brackets.empty())
            res.c0 = 0.5 * (res.sign_change_brackets.front().first +
                            res.sign_change_brackets.front().second);
    }

    // The c0 run tracks the saddle wave for a time ~ log(1/tol)/lambda3, so
    // its outcome is reported on the base horizon without the doubling policy;
    // a tight tol makes it Persistent through 20+ delay windows.
    double final_horizon = opts.horizon_factor * std::max(res.c0 * ctx.spec.delay, 1.0);
    res.outcome_at_c0 = integrate(ctx, res.c0, SharpStart{}, final_horizon, opts.integrate);
    res.probes.push_back(ProbeRecord{res.c0, final_horizon, outcome_name(res.outcome_at_c0)});
    return res;
}

std::optional<double> empirical_min_smooth_speed(const CharContext& ctx,
                                                 const std::vector<double>& c_grid,
                                                 const ShootingOptions& opts) {
    for (std::size_t i = 1; i < c_grid.size(); ++i)
        if (!(c_grid[i] > c_grid[i - 1]))
            throw ParamError("empirical_min_smooth_speed: grid must be strictly increasing");
    double amp = ctx.consts.zeta1 / 20.0;
    for (double c : c_grid) {
        double cr = c * ctx.spec.delay;
        double traverse = std::log(std::max(ctx.consts.kappa / amp, 2.0)) / lambda0(ctx, c);
        double horizon = std::max(opts.horizon_factor * std::max(cr, 1.0),
                                  traverse + 25.0 * std::max(cr, 1.0));
        TrajectoryOutcome o =
            integrate(ctx, c, SmoothTailStart{amp}, horizon, opts.integrate);
        if (std::holds_alternative<Persistent>(o)) return c;
    }
    return std::nullopt;
}

} // namespace degwave

#include "degwave/kinetics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "degwave/rootfind.hpp"

namespace degwave {

namespace {

double lerp_table(const std::vector<double>& xs, const std::vector<double>& ys, double u) {
    if (u < xs.front() || u > xs.back())
        throw DomainError("tabulated law evaluated outside its grid");
    auto it = std::upper_bound(xs.begin(), xs.end(), u);
    if (it == xs.begin()) return ys.front();
    if (it == xs.end()) return ys.back();
    std::size_t i = static_cast<std::size_t>(it - xs.begin());
    double w = (u - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

void validate_table(const std::vector<double>& xs, const std::vector<double>& ys,
                    const char* what) {
    if (xs.size() < 2 || xs.size() != ys.size())
        throw ModelError(std::string(what) + ": table needs >= 2 matching (u, value) pairs");
    if (xs.front() > 0.0)
        throw ModelError(std::string(what) + ": table must start at u = 0");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] <= xs[i - 1])
            throw ModelError(std::string(what) + ": table grid must be strictly increasing");
    for (double v : ys)
        if (!std::isfinite(v) || v < 0.0)
            throw ModelError(std::string(what) + ": table values must be finite and >= 0");
}

// Central difference with step h = max(1e-6, 1e-6 u), clamped into the grid.
double table_derivative(const std::vector<double>& xs, const std::vector<double>& ys, double u) {
    double h = std::max(1e-6, 1e-6 * u);
    double lo = std::max(xs.front(), u - h);
    double hi = std::min(xs.back(), u + h);
    return (lerp_table(xs, ys, hi) - lerp_table(xs, ys, lo)) / (hi - lo);
}

} // namespace

BirthLaw BirthLaw::nicholson(double p, double a, double q) {
    BirthLaw b;
    b.kind = BirthKind::Nicholson;
    b.p = p; b.a = a; b.q = q;
    return b;
}

BirthLaw BirthLaw::mackey_glass(double p, double a, double q) {
    BirthLaw b;
    b.kind = BirthKind::MackeyGlass;
    b.p = p; b.a = a; b.q = q;
    return b;
}

BirthLaw BirthLaw::age_structured(double p, double gamma, double r) {
    BirthLaw b;
    b.kind = BirthKind::AgeStructured;
    b.p = p; b.gamma = gamma; b.age_r = r;
    return b;
}

BirthLaw BirthLaw::linear(double p) {
    BirthLaw b;
    b.kind = BirthKind::Linear;
    b.p = p;
    return b;
}

BirthLaw BirthLaw::tabulated(std::vector<double> u, std::vector<double> v) {
    BirthLaw b;
    b.kind = BirthKind::Tabulated;
    b.table_u = std::move(u);
    b.table_v = std::move(v);
    return b;
}

DeathLaw DeathLaw::linear(double delta) {
    DeathLaw d;
    d.kind = DeathKind::Linear;
    d.delta = delta;
    return d;
}

DeathLaw DeathLaw::quadratic(double delta) {
    DeathLaw d;
    d.kind = DeathKind::Quadratic;
    d.delta = delta;
    return d;
}

DeathLaw DeathLaw::power(double delta, double k) {
    DeathLaw d;
    d.kind = DeathKind::Power;
    d.delta = delta;
    d.k = k;
    return d;
}

DeathLaw DeathLaw::tabulated(std::vector<double> u, std::vector<double> v) {
    DeathLaw d;
    d.kind = DeathKind::Tabulated;
    d.table_u = std::move(u);
    d.table_v = std::move(v);
    return d;
}

double birth(const KineticsSpec& spec, double u) {
    if (u < 0.0) throw DomainError("birth law: u < 0");
    const BirthLaw& b = spec.birth;
    switch (b.kind) {
        case BirthKind::Nicholson:     return b.p * u * std::exp(-b.a * std::pow(u, b.q));
        case BirthKind::MackeyGlass:   return b.p * u / (1.0 + b.a * std::pow(u, b.q));
        case BirthKind::AgeStructured: return b.p * std::exp(-b.gamma * b.age_r) * u;
        case BirthKind::Linear:        return b.p * u;
        case BirthKind::Tabulated:     return lerp_table(b.table_u, b.table_v, u);
    }
    throw DomainError("birth law: unknown kind");
}

double birth_prime(const KineticsSpec& spec, double u) {
    if (u < 0.0) throw DomainError("birth law: u < 0");
    const BirthLaw& b = spec.birth;
    switch (b.kind) {
        case BirthKind::Nicholson: {
            double uq = std::pow(u, b.q);
            return b.p * std::exp(-b.a * uq) * (1.0 - b.a * b.q * uq);
        }
        case BirthKind::MackeyGlass: {
            double uq = std::pow(u, b.q);
            double den = 1.0 + b.a * uq;
            return b.p * (1.0 + b.a * (1.0 - b.q) * uq) / (den * den);
        }
        case BirthKind::AgeStructured: return b.p * std::exp(-b.gamma * b.age_r);
        case BirthKind::Linear:        return b.p;
        case BirthKind::Tabulated:     return table_derivative(b.table_u, b.table_v, u);
    }
    throw DomainError("birth law: unknown kind");
}

double death(const KineticsSpec& spec, double u) {
    if (u < 0.0) throw DomainError("death law: u < 0");
    const DeathLaw& d = spec.death;
    switch (d.kind) {
        case DeathKind::Linear:    return d.delta * u;
        case DeathKind::Quadratic: return d.delta * u * u;
        case DeathKind::Power:     return d.delta * std::pow(u, d.k);
        case DeathKind::Tabulated: return lerp_table(d.table_u, d.table_v, u);
    }
    throw DomainError("death law: unknown kind");
}

double death_prime(const KineticsSpec& spec, double u) {
    if (u < 0.0) throw DomainError("death law: u < 0");
    const DeathLaw& d = spec.death;
    switch (d.kind) {
        case DeathKind::Linear:    return d.delta;
        case DeathKind::Quadratic: return 2.0 * d.delta * u;
        case DeathKind::Power:     return d.delta * d.k * std::pow(u, d.k - 1.0);
        case DeathKind::Tabulated: return table_derivative(d.table_u, d.table_v, u);
    }
    throw DomainError("death law: unknown kind");
}

double eval(const KineticsSpec& spec, Which which, double u) {
    switch (which) {
        case Which::Birth:      return birth(spec, u);
        case Which::Death:      return death(spec, u);
        case Which::BirthPrime: return birth_prime(spec, u);
        case Which::DeathPrime: return death_prime(spec, u);
    }
    throw DomainError("eval: unknown selector");
}

double death_inverse(const KineticsSpec& spec, double v) {
    if (v < 0.0) throw DomainError("death_inverse: v < 0");
    if (v == 0.0) return 0.0;
    switch (spec.death.kind) {
        case DeathKind::Linear:    return v / spec.death.delta;
        case DeathKind::Quadratic: return std::sqrt(v / spec.death.delta);
        case DeathKind::Power:     return std::pow(v / spec.death.delta, 1.0 / spec.death.k);
        case DeathKind::Tabulated: break;
    }
    double hi = 1.0;
    for (int i = 0; i < 200 && death(spec, hi) < v; ++i) {
        hi *= 2.0;
        if (spec.death.kind == DeathKind::Tabulated && hi > spec.death.table_u.back()) {
            hi = spec.death.table_u.back();
            if (death(spec, hi) < v)
                throw DomainError("death_inverse: v above the tabulated range");
            break;
        }
    }
    return bisect_secant([&](double s) { return death(spec, s) - v; }, 0.0, hi);
}

void validate_spec(const KineticsSpec& spec) {
    if (!(spec.m > 1.0)) throw ModelError("degeneracy exponent requires m > 1");
    if (!(spec.diffusivity > 0.0)) throw ModelError("diffusivity requires D > 0");
    if (!(spec.delay >= 0.0)) throw ModelError("delay requires r >= 0");

    switch (spec.birth.kind) {
        case BirthKind::Nicholson:
        case BirthKind::MackeyGlass:
            if (!(spec.birth.p > 0.0 && spec.birth.a > 0.0 && spec.birth.q > 0.0))
                throw ModelError("birth law requires p, a, q > 0");
            break;
        case BirthKind::AgeStructured:
            if (!(spec.birth.p > 0.0 && spec.birth.gamma > 0.0 && spec.birth.age_r >= 0.0))
                throw ModelError("age-structured birth requires p, gamma > 0 and r >= 0");
            break;
        case BirthKind::Linear:
            if (!(spec.birth.p > 0.0)) throw ModelError("linear birth requires p > 0");
            break;
        case BirthKind::Tabulated:
            validate_table(spec.birth.table_u, spec.birth.table_v, "birth");
            if (spec.birth.table_v.front() != 0.0)
                throw ModelError("birth: table must have b(0) = 0");
            break;
    }

    // death hypotheses: d(0)=0, d'(s)>0, d''(s)>=0 for s>0
    switch (spec.death.kind) {
        case DeathKind::Linear:
        case DeathKind::Quadratic:
            if (!(spec.death.delta > 0.0)) throw ModelError("death law requires delta > 0");
            break;
        case DeathKind::Power:
            if (!(spec.death.delta > 0.0)) throw ModelError("death law requires delta > 0");
            if (!(spec.death.k >= 1.0))
                throw ModelError("power death requires k >= 1 (d'' >= 0)");
            break;
        case DeathKind::Tabulated: {
            validate_table(spec.death.table_u, spec.death.table_v, "death");
            const auto& xs = spec.death.table_u;
            const auto& ys = spec.death.table_v;
            if (ys.front() != 0.0) throw ModelError("death: table must have d(0) = 0");
            double prev_slope = -1.0;
            for (std::size_t i = 1; i < xs.size(); ++i) {
                double slope = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
                if (!(slope > 0.0))
                    throw ModelError("death: table must be strictly increasing (d' > 0)");
                if (i > 1 && slope < prev_slope - 1e-12 * std::fabs(prev_slope))
                    throw ModelError("death: table must be convex (d'' >= 0)");
                prev_slope = slope;
            }
            break;
        }
    }
}

KineticsSpec make_spec(double m, double diffusivity, double delay,
                       BirthLaw birth, DeathLaw death) {
    KineticsSpec spec;
    spec.m = m;
    spec.diffusivity = diffusivity;
    spec.delay = delay;
    spec.birth = std::move(birth);
    spec.death = std::move(death);
    validate_spec(spec);
    return spec;
}

namespace {

// Bracket an interior maximum of b by doubling; returns false when b keeps
// increasing (monotone regime).
bool bracket_birth_max(const KineticsSpec& spec, double& lo, double& hi) {
    double u_cap = 1e9;
    if (spec.birth.kind == BirthKind::Tabulated) u_cap = spec.birth.table_u.back();
    double u_prev = 0.0, b_prev = 0.0;
    double u = 1e-3 * u_cap > 1e-3 ? 1e-3 : 1e-3;  // start small, absolute scale
    double u_mid = 0.0, b_mid = -1.0;
    while (u <= u_cap) {
        double bu = birth(spec, u);
        if (b_mid >= 0.0 && bu < b_mid && b_mid >= b_prev) {
            lo = u_prev;
            hi = u;
            return true;
        }
        u_prev = u_mid; b_prev = b_mid;
        u_mid = u; b_mid = bu;
        u *= 1.25;
    }
    return false;
}

double birth_slope_at_zero(const KineticsSpec& spec) {
    const BirthLaw& b = spec.birth;
    switch (b.kind) {
        case BirthKind::Nicholson:     return b.p;
        case BirthKind::MackeyGlass:   return b.p;
        case BirthKind::AgeStructured: return b.p * std::exp(-b.gamma * b.age_r);
        case BirthKind::Linear:        return b.p;
        case BirthKind::Tabulated:
            return (b.table_v[1] - b.table_v[0]) / (b.table_u[1] - b.table_u[0]);
    }
    return 0.0;
}

double death_slope_at_zero(const KineticsSpec& spec) {
    const DeathLaw& d = spec.death;
    switch (d.kind) {
        case DeathKind::Linear:    return d.delta;
        case DeathKind::Quadratic: return 0.0;
        case DeathKind::Power:     return d.k == 1.0 ? d.delta : 0.0;
        case DeathKind::Tabulated:
            return (d.table_v[1] - d.table_v[0]) / (d.table_u[1] - d.table_u[0]);
    }
    return 0.0;
}

} // namespace

DerivedConstants derive_constants(const KineticsSpec& spec) {
    validate_spec(spec);
    DerivedConstants dc;
    dc.bp0 = birth_slope_at_zero(spec);
    dc.dp0 = death_slope_at_zero(spec);

    double lo, hi;
    if (bracket_birth_max(spec, lo, hi)) {
        dc.s_M = golden_max([&](double u) { return birth(spec, u); }, lo, hi, 1e-13);
        dc.M = birth(spec, dc.s_M);
        dc.zeta2 = death_inverse(spec, dc.M);
    } else {
        // Monotone birth: no interior maximum. Cap zeta2 at 2*kappa and use
        // the capped surrogates; oscillation machinery is disabled downstream.
        dc.monotone_birth = true;
        dc.s_M = infinity();
    }

    // kappa: unique positive root of b - d on (0, zeta2]; in the monotone
    // regime the bracket is expanded until b - d changes sign.
    auto bd = [&](double s) { return birth(spec, s) - death(spec, s); };
    double kap_hi;
    if (!dc.monotone_birth) {
        kap_hi = dc.zeta2;
        if (bd(kap_hi) > 0.0)
            throw ModelError("no positive equilibrium: b - d does not change sign on (0, zeta2]");
    } else {
        kap_hi = 1.0;
        bool found = false;
        for (int i = 0; i < 200; ++i) {
            if (spec.birth.kind == BirthKind::Tabulated &&
                kap_hi > spec.birth.table_u.back())
                break;
            if (bd(kap_hi) < 0.0) { found = true; break; }
            kap_hi *= 2.0;
        }
        if (!found) throw ModelError("no positive equilibrium: b > d everywhere probed");
    }
    double kap_lo = 1e-12 * kap_hi;
    if (bd(kap_lo) <= 0.0)
        throw ModelError("no positive equilibrium: b - d not positive near 0 (b'(0) <= d'(0)?)");
    dc.kappa = bisect_secant(bd, kap_lo, kap_hi, 0.0, 1e-14);

    if (dc.monotone_birth) {
        dc.zeta2 = 2.0 * dc.kappa;
        dc.M = birth(spec, dc.zeta2);
        dc.theta = dc.M;
        dc.zeta1 = 0.5 * dc.kappa;
    } else {
        dc.theta = birth(spec, dc.zeta2);
        // zeta1 in (0, s_M) with b(zeta1) = theta; b is increasing there.
        dc.zeta1 = bisect_secant([&](double s) { return birth(spec, s) - dc.theta; },
                                 1e-300, dc.s_M, 0.0, 1e-14);
    }

    dc.bpk = birth_prime(spec, dc.kappa);
    dc.dpk = death_prime(spec, dc.kappa);

    dc.unimodal = check_unimodality(spec).unimodal;
    if (dc.unimodal) {
        FeedbackReport fr = check_feedback(spec, dc);
        dc.feedback = fr.as_printed;
        dc.feedback_alt = fr.alternative;
    }
    return dc;
}

UnimodalityReport check_unimodality(const KineticsSpec& spec) {
    validate_spec(spec);
    UnimodalityReport rep;
    rep.unimodal = true;
    auto fail = [&](const std::string& msg) {
        rep.unimodal = false;
        rep.violations.push_back(msg);
    };
    std::ostringstream os;

    double bp0 = birth_slope_at_zero(spec);
    double dp0 = death_slope_at_zero(spec);
    if (!(bp0 > dp0)) {
        os.str("");
        os << "b'(0) = " << bp0 << " is not > d'(0) = " << dp0;
        fail(os.str());
    }

    double zlo, zhi;
    bool has_max = bracket_birth_max(spec, zlo, zhi);
    if (!has_max) fail("b has no interior local maximum (monotone birth)");

    double zeta2;
    if (has_max) {
        double s_M = golden_max([&](double u) { return birth(spec, u); }, zlo, zhi, 1e-13);
        zeta2 = death_inverse(spec, birth(spec, s_M));
    } else {
        zeta2 = 1.0;
        for (int i = 0; i < 60; ++i) {
            if (birth(spec, zeta2) - death(spec, zeta2) < 0.0) break;
            zeta2 *= 2.0;
        }
    }

    auto bd = [&](double s) { return birth(spec, s) - death(spec, s); };
    const int n = 10000;
    double kappa = -1.0;
    int crossings = 0;
    double prev_s = zeta2 / n, prev = bd(prev_s);
    int extrema = 0;
    double b_prev2 = birth(spec, 0.5 * prev_s), b_prev = birth(spec, prev_s);
    for (int i = 2; i <= n; ++i) {
        double s = zeta2 * i / n;
        double cur = bd(s);
        if (prev > 0.0 && cur <= 0.0) {
            if (crossings == 0)
                kappa = bisect_secant(bd, prev_s, s, 0.0, 1e-14);
            ++crossings;
        } else if (prev <= 0.0 && cur > 0.0) {
            ++crossings;
        }
        double b_cur = birth(spec, s);
        if (b_prev > b_prev2 && b_prev >= b_cur) ++extrema;  // local max
        if (b_prev < b_prev2 && b_prev <= b_cur) ++extrema;  // local min
        b_prev2 = b_prev; b_prev = b_cur;
        prev = cur; prev_s = s;
    }
    if (extrema > 1) {
        os.str("");
        os << "b has " << extrema << " local extrema on (0, zeta2]";
        fail(os.str());
    }
    if (kappa < 0.0) {
        fail("b(s) = d(s) has no positive solution on (0, zeta2]");
    } else {
        if (crossings > 1) {
            os.str("");
            os << "b(s) = d(s) has " << crossings
               << " solutions on (0, zeta2]; expected only kappa";
            fail(os.str());
        }
        double bpk = birth_prime(spec, kappa);
        double dpk = death_prime(spec, kappa);
        if (!(bpk < dpk)) {
            os.str("");
            os << "b'(kappa) = " << bpk << " is not < d'(kappa) = " << dpk;
            fail(os.str());
        }
        // d(s) < b(s) <= b'(0) s on (0, kappa)
        for (int i = 1; i < n; ++i) {
            double s = kappa * i / n;
            double bs = birth(spec, s);
            if (!(death(spec, s) < bs)) {
                os.str("");
                os << "d(s) < b(s) fails at s = " << s;
                fail(os.str());
                break;
            }
            if (bs > bp0 * s * (1.0 + 1e-9)) {
                os.str("");
                os << "b(s) <= b'(0) s fails at s = " << s;
                fail(os.str());
                break;
            }
        }
    }
    return rep;
}

FeedbackReport check_feedback(const KineticsSpec& spec, const DerivedConstants& dc) {
    FeedbackReport rep;
    rep.as_printed = true;
    rep.alternative = true;
    double lo = death_inverse(spec, dc.theta);
    double hi = dc.zeta2;
    const int n = 10000;
    for (int i = 0; i <= n; ++i) {
        double s = lo + (hi - lo) * i / n;
        if (std::fabs(s - dc.kappa) < 1e-9 * (1.0 + dc.kappa)) continue;
        double bs = birth(spec, s);
        if (!((bs - dc.kappa) * (s - dc.kappa) < 0.0)) rep.as_printed = false;
        if (!((death_inverse(spec, bs) - dc.kappa) * (s - dc.kappa) < 0.0))
            rep.alternative = false;
        if (!rep.as_printed && !rep.alternative) break;
    }
    return rep;
}

double envelope_eps0(const KineticsSpec& spec, const DerivedConstants& dc) {
    double eps0 = 0.5 * dc.zeta1;
    while (eps0 > 0.0 && !(birth(spec, dc.zeta1 - eps0) > 0.0)) eps0 *= 0.5;
    return eps0;
}

double envelope_bstar(const KineticsSpec& spec, const DerivedConstants& dc, double u) {
    if (u < 0.0) throw DomainError("envelope_bstar: u < 0");
    if (!dc.unimodal)
        throw DomainError("envelope_bstar requires the unimodality condition");
    return std::min(dc.bp0 * u, dc.M);
}

double envelope_beps(const KineticsSpec& spec, const DerivedConstants& dc,
                     double eps, double u) {
    if (u < 0.0) throw DomainError("envelope_beps: u < 0");
    if (!dc.unimodal)
        throw DomainError("envelope_beps requires the unimodality condition");
    if (!(eps > 0.0) || eps >= envelope_eps0(spec, dc))
        throw DomainError("envelope_beps: eps outside (0, eps0)");
    return std::min(birth(spec, u), death(spec, dc.zeta1 - eps));
}

} // namespace degwave

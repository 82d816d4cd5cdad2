#ifndef DEGWAVE_KINETICS_HPP
#define DEGWAVE_KINETICS_HPP

#include <limits>
#include <string>
#include <vector>

#include "degwave/errors.hpp"

namespace degwave {

// Birth laws b(u). All built-ins have b(0)=0 and analytic derivatives; the
// tabulated law interpolates linearly and differentiates by central
// differences.
enum class BirthKind { Nicholson, MackeyGlass, AgeStructured, Linear, Tabulated };

struct BirthLaw {
    BirthKind kind = BirthKind::Nicholson;
    double p = 4.0;      // Nicholson / MackeyGlass / AgeStructured / Linear
    double a = 0.5;      // Nicholson / MackeyGlass
    double q = 1.0;      // Nicholson / MackeyGlass
    double gamma = 0.0;  // AgeStructured
    double age_r = 0.0;  // AgeStructured maturation delay in b(u)=p e^{-gamma r} u
    std::vector<double> table_u, table_v;  // Tabulated

    static BirthLaw nicholson(double p, double a, double q = 1.0);
    static BirthLaw mackey_glass(double p, double a, double q);
    static BirthLaw age_structured(double p, double gamma, double r);
    static BirthLaw linear(double p);
    static BirthLaw tabulated(std::vector<double> u, std::vector<double> v);
};

enum class DeathKind { Linear, Quadratic, Power, Tabulated };

struct DeathLaw {
    DeathKind kind = DeathKind::Linear;
    double delta = 0.5;
    double k = 1.0;  // Power exponent, k >= 1
    std::vector<double> table_u, table_v;

    static DeathLaw linear(double delta);
    static DeathLaw quadratic(double delta);
    static DeathLaw power(double delta, double k);
    static DeathLaw tabulated(std::vector<double> u, std::vector<double> v);
};

// One model instance of u_t = D (u^m)_xx - d(u) + b(u(t-r)).
// Construction through make_spec validates m > 1, D > 0, r >= 0 and the
// death-law hypotheses d(0)=0, d'(s)>0, d''(s)>=0.
struct KineticsSpec {
    double m = 2.0;
    double diffusivity = 1.0;
    double delay = 1.0;
    BirthLaw birth;
    DeathLaw death;
};

KineticsSpec make_spec(double m, double diffusivity, double delay,
                       BirthLaw birth, DeathLaw death);
void validate_spec(const KineticsSpec& spec);

enum class Which { Birth, Death, BirthPrime, DeathPrime };

// Point evaluation of the laws and their derivatives. u < 0 is a domain
// error; tabulated laws reject extrapolation.
double eval(const KineticsSpec& spec, Which which, double u);

double birth(const KineticsSpec& spec, double u);
double death(const KineticsSpec& spec, double u);
double birth_prime(const KineticsSpec& spec, double u);
double death_prime(const KineticsSpec& spec, double u);

// d^{-1}(v) for v >= 0, by bracketed root finding.
double death_inverse(const KineticsSpec& spec, double v);

inline double infinity() { return std::numeric_limits<double>::infinity(); }

// Structural constants of the model. In the monotone-birth regime
// (no interior maximum of b) s_M is +inf, zeta2 is capped at 2*kappa and
// M, theta, zeta1 are the capped surrogates described in the docs.
struct DerivedConstants {
    double kappa = 0.0;   // positive equilibrium, b(kappa)=d(kappa)
    double s_M = 0.0;     // maximum point of b; +inf when b is monotone
    double M = 0.0;       // max b = b(s_M)
    double zeta2 = 0.0;   // d^{-1}(M)
    double theta = 0.0;   // b(zeta2)
    double zeta1 = 0.0;   // b(zeta1) = theta on (0, s_M)
    double bp0 = 0.0, dp0 = 0.0;  // b'(0), d'(0)
    double bpk = 0.0, dpk = 0.0;  // b'(kappa), d'(kappa)
    bool monotone_birth = false;
    bool unimodal = false;      // unimodality condition holds on a dense grid
    bool feedback = false;      // feedback condition as printed
    bool feedback_alt = false;  // alternative reading (d^{-1}(b(s))-kappa)(s-kappa)<0
};

DerivedConstants derive_constants(const KineticsSpec& spec);

struct UnimodalityReport {
    bool unimodal = false;
    std::vector<std::string> violations;  // each names the clause and a witnessing s
};

UnimodalityReport check_unimodality(const KineticsSpec& spec);

struct FeedbackReport {
    bool as_printed = false;   // (b(s)-kappa)(s-kappa) < 0 on [d^{-1}(theta), d^{-1}(M)] \ {kappa}
    bool alternative = false;  // (d^{-1}(b(s))-kappa)(s-kappa) < 0, same interval
};

FeedbackReport check_feedback(const KineticsSpec& spec, const DerivedConstants& dc);

// Monotone envelopes of the birth law under unimodality:
//   b*(u)   = min{ b'(0) u, M }
//   b_eps(u)= min{ b(u), d(zeta1 - eps) }
double envelope_bstar(const KineticsSpec& spec, const DerivedConstants& dc, double u);
double envelope_beps(const KineticsSpec& spec, const DerivedConstants& dc,
                     double eps, double u);

// Largest admissible eps for b_eps: zeta1/2, capped so b(zeta1 - eps) > 0.
double envelope_eps0(const KineticsSpec& spec, const DerivedConstants& dc);

} // namespace degwave

#endif

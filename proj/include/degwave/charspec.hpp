#ifndef DEGWAVE_CHARSPEC_HPP
#define DEGWAVE_CHARSPEC_HPP

#include <complex>
#include <optional>
#include <string>

#include "degwave/kinetics.hpp"

namespace degwave {

// Model plus derived constants, with the effective diffusion scale
// A_kappa = D m kappa^{m-1} of the linearization at kappa.
struct CharContext {
    KineticsSpec spec;
    DerivedConstants consts;
    double a_kappa = 0.0;
};

CharContext make_char_context(const KineticsSpec& spec);
CharContext make_char_context(const KineticsSpec& spec, const DerivedConstants& dc);

// chi_0(lambda) = b'(0) e^{-lambda c r} - c lambda - d'(0)
double chi0(const CharContext& ctx, double c, double lambda);

// chi_kappa(lambda) = A_kappa lambda^2 + b'(kappa) e^{-lambda c r} - c lambda - d'(kappa)
double chik(const CharContext& ctx, double c, double lambda);
std::complex<double> chik(const CharContext& ctx, double c, std::complex<double> lambda);
double chik_dlambda(const CharContext& ctx, double c, double lambda);

// The unique positive root of chi_0: lambda0 = omega_r / c, where omega_r
// solves b'(0) e^{-r w} = w + d'(0) on (0, b'(0)-d'(0)).
double lambda0(const CharContext& ctx, double c);
double omega_r(const CharContext& ctx);

// Negative real roots of chi_kappa by sign scan over [-Lambda_max, 0);
// extra_focus adds a refined window around a candidate double root.
int count_chik_negative_roots(const CharContext& ctx, double c,
                              std::optional<double> extra_focus = std::nullopt);
double chik_lambda_max(const CharContext& ctx, double c);

// Speed c_kappa at which chi_kappa acquires a negative double root
// (oscillation onset, +inf when none exists).
struct CKappaResult {
    double c = 0.0;              // +inf when no finite c_kappa
    double lambda_double = 0.0;  // the double root (when finite)
    double residual_chi = 0.0;
    double residual_dchi = 0.0;
    bool verified = false;       // root count flips 2 -> 0 across c_kappa
    std::string note;
};

CKappaResult find_c_kappa(const CharContext& ctx);

// omega_kappa < -2 solving 2 d'(k) = b'(k) e^{-w}(2+w), and the Theorem
// asymptotic constant mu_kappa = sqrt(2 A_k w_k / b'(k)) e^{w_k/2}.
struct MuKappa {
    double omega_kappa = 0.0;
    double mu = 0.0;
    bool omega_in_expected_bracket = true;  // diagnostic: root found below -2
};

MuKappa mu_kappa(const CharContext& ctx);

// c_star: threshold above which the rescaled characteristic function gains
// roots with positive real part beyond the single real one. Solved from the
// imaginary-axis crossing system over sin branches; +inf when no branch
// yields sigma > 0.
struct CStarResult {
    double c = 0.0;       // +inf allowed
    double y = 0.0;       // crossing frequency at the maximizing branch
    double sigma = 0.0;   // 1/c^2 at the crossing
    std::string note;
};

CStarResult find_c_star(const CharContext& ctx);
double mu_star(const CharContext& ctx);

// Certified nonexistence bound from the phase-transform construction:
// below cdot = min(c1, c2) no wave profile can exist.
struct LowerBoundSpeed {
    double cdot = 0.0;
    double mu0 = 0.0;  // c1 * r
    double zeta0 = 0.0, eps = 0.0, delta = 0.0;
    double C1 = 0.0, c1 = 0.0, c2 = 0.0;
    double cbar = 0.0;  // provisional speed cap used for C1
};

LowerBoundSpeed lower_bound_speed(const CharContext& ctx);

// Smallest doubling-ladder speed whose quasi-monotone delay-free phase-plane
// trajectory from the sharp edge stays positive past zeta2 + 1 (the blow-up
// regime guard used to seed shooting ladders and the C1 cap).
double blowup_guard_speed(const CharContext& ctx);

// Bundle of every threshold, as emitted by the `speeds` CLI subcommand.
struct SpeedThresholds {
    double c_kappa = 0.0;              // extended real
    double c_star = 0.0;               // extended real
    std::optional<double> mu_kappa;    // none when b'(kappa) >= 0
    std::optional<double> mu_star;     // none when b'(kappa) >= -d'(kappa)
    std::optional<double> omega_kappa;
    double cdot = 0.0;
    double mu0 = 0.0;
};

SpeedThresholds compute_thresholds(const CharContext& ctx);

} // namespace degwave

#endif

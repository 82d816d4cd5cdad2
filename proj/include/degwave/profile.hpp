#ifndef DEGWAVE_PROFILE_HPP
#define DEGWAVE_PROFILE_HPP

#include <optional>
#include <variant>
#include <vector>

#include "degwave/charspec.hpp"
#include "degwave/ode45.hpp"
#include "degwave/tail.hpp"

namespace degwave {

// Sharp-edge power law phi ~ (edge_coeff * t)^{1/(m-1)} near t = 0 plus the
// exponent and coefficient recovered from a log-log fit of the integrated
// first segment.
struct EdgeAsymptotics {
    double exponent_theory = 0.0;  // 1/(m-1)
    double coeff_theory = 0.0;     // ((m-1) c / (D m))^{1/(m-1)}
    double exponent_fit = 0.0;
    double coeff_fit = 0.0;
    double fit_residual = 0.0;     // max |log phi - fit| over the fit window
};

// Exponential left tail phi ~ C1 e^{lambda t} of a smooth wave, fitted from
// the integrated trajectory, with a correction-bound fit |phi - C1 e^{l t}|
// <= C2 e^{L t}.
struct LeftTailFit {
    double lambda = 0.0;
    double C1 = 0.0;
    double Lambda = 0.0;
    double C2 = 0.0;
    double fit_residual = 0.0;
};

struct SegmentInfo {
    double t_lo = 0.0, t_hi = 0.0;
    std::size_t steps = 0;
};

// Piecewise dense-output trajectory phi(t) with flux psi = D (phi^m)'.
// Sharp starts store the closed-form bootstrap on [0, t_boot]; history
// before the stored range is 0 (sharp) or the exponential ansatz (smooth).
struct WaveProfile {
    double speed = 0.0;
    double cr = 0.0;  // delay in the wave variable
    double m = 2.0, diffusivity = 1.0;
    enum class StartKind { Sharp, Smooth } start_kind = StartKind::Sharp;

    DenseTrajectory traj;
    std::vector<SegmentInfo> segments;
    std::optional<EdgeAsymptotics> edge;

    // sharp bootstrap parameters: phi = (edge_coeff * t)^{edge_exp} on [0, t_boot]
    double t_boot = 0.0;
    double edge_coeff = 0.0, edge_exp = 0.0;

    // smooth ansatz parameters: phi = amplitude * e^{rate * t} for t <= 0
    double smooth_amplitude = 0.0, smooth_rate = 0.0;

    double phi(double t) const;
    double psi(double t) const;
    double t_end() const { return traj.empty() ? t_boot : traj.t_end(); }
};

struct DecayedToZero { double t_death = 0.0; };
struct Blowup { double t_escape = 0.0; };
struct Persistent {
    WaveProfile profile;
    TailReport tail;
};
using TrajectoryOutcome = std::variant<DecayedToZero, Blowup, Persistent>;

const char* outcome_name(const TrajectoryOutcome& outcome);

struct SharpStart {};
struct SmoothTailStart {
    double amplitude = 0.0;  // must lie in (0, zeta1/10]
};
using StartMode = std::variant<SharpStart, SmoothTailStart>;

struct IntegrationGuards {
    double floor = 1e-10;
    double escape = 0.0;  // 0 -> default zeta2 + max(1, zeta2)
};

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    IntegrationGuards guards;
    double tail_window = 0.0;  // 0 -> 5*cr (or horizon/10 when r = 0)
};

// Delay-free first window (0, t_end] of the sharp wave: the maximal solution
// of c phi' = D(phi^m)'' - d(phi), phi(0) = 0, (phi^m)'(0) = 0, started from
// the closed-form leading term on [0, t_boot].
WaveProfile first_segment(const CharContext& ctx, double c, double t_end);

// Method-of-steps integration of the full wave equation.
TrajectoryOutcome integrate(const CharContext& ctx, double c, const StartMode& start,
                            double horizon, const IntegrateOptions& opts = {});

// As integrate(), but also hands back the (possibly truncated) trajectory for
// decayed and escaped runs; used by the CLI to dump CSV samples.
std::pair<TrajectoryOutcome, WaveProfile> integrate_full(
    const CharContext& ctx, double c, const StartMode& start, double horizon,
    const IntegrateOptions& opts = {});

// Tail classification of a persistent profile over trailing windows.
TailReport classify_tail(const WaveProfile& profile, double window, double kappa);

// Edge regularity per the degeneracy index: non-C1 iff m >= 2, with the
// one-sided derivative measured from an integrated first segment.
struct EdgeRegularity {
    bool is_c1 = false;
    double measured_derivative = 0.0;  // phi'(t_probe) at a small probe time
    double theory_derivative = 0.0;    // c/(mD) for m = 2; 0 for m < 2; inf for m > 2
};

EdgeRegularity edge_regularity(const CharContext& ctx, double c);

// Log-log edge fit of a sharp profile (also stored inside WaveProfile.edge).
EdgeAsymptotics fit_edge(const CharContext& ctx, const WaveProfile& profile);

// Exponential left-tail fit of a smooth-start profile.
LeftTailFit fit_left_tail(const CharContext& ctx, const WaveProfile& profile);

// The delay functional phi_cr(phi) = inf{theta : int_theta^phi D m s^{m-1} /
// psi(s) ds <= c r}, evaluated by quadrature on the stored leading edge.
double phase_delay_functional(const CharContext& ctx, const WaveProfile& profile,
                              double phi_value);

} // namespace degwave

#endif

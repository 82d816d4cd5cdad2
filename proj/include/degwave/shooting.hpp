#ifndef DEGWAVE_SHOOTING_HPP
#define DEGWAVE_SHOOTING_HPP

#include <optional>
#include <utility>
#include <vector>

#include "degwave/profile.hpp"

namespace degwave {

struct ProbeRecord {
    double c = 0.0;
    double horizon = 0.0;
    const char* outcome = "";
};

struct ShootingOptions {
    double tol = 1e-4;            // bracket width target for c0
    double horizon_factor = 40.0; // initial horizon = factor * max(cr, 1)
    int max_horizon_doublings = 3;
    IntegrateOptions integrate;
};

struct ShootingResult {
    double c0 = 0.0;
    double bracket_width = 0.0;
    int iterations = 0;
    double guard_lo = 0.0, guard_hi = 0.0;
    TrajectoryOutcome outcome_at_c0;
    std::vector<ProbeRecord> probes;
    // sub-brackets where the decay predicate changes sign; more than one
    // entry means the predicate was not monotone within the guard bracket
    std::vector<std::pair<double, double>> sign_change_brackets;
    bool monotone_predicate = true;
    // the sharp speed's uniqueness is conjectural; consumers must not assume it
    bool uniqueness_conjectural = true;
};

// Sharp-start trajectory outcome with the horizon-doubling stability policy.
TrajectoryOutcome probe_outcome(const CharContext& ctx, double c,
                                const ShootingOptions& opts,
                                std::vector<ProbeRecord>* log = nullptr);

// Geometric ladders around the seed speed: the largest decaying rung below
// and the smallest blowing-up rung above.
std::pair<double, double> find_guards(const CharContext& ctx,
                                      const ShootingOptions& opts = {},
                                      std::vector<ProbeRecord>* log = nullptr);

// Bisection for the sharp speed c0 on the decay/non-decay predicate.
ShootingResult find_sharp_speed(const CharContext& ctx, double tol,
                                ShootingOptions opts = {});

// Smallest grid speed whose smooth-tail run persists (EMPIRICAL smooth
// existence threshold; none when no grid point persists).
std::optional<double> empirical_min_smooth_speed(const CharContext& ctx,
                                                 const std::vector<double>& c_grid,
                                                 const ShootingOptions& opts = {});

} // namespace degwave

#endif

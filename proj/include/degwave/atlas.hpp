#ifndef DEGWAVE_ATLAS_HPP
#define DEGWAVE_ATLAS_HPP

#include <optional>
#include <string>
#include <vector>

#include "degwave/shooting.hpp"

namespace degwave {

// One delay slice of the speed curves, with the wave type observed at c0.
// Taxonomy labels: A = smooth, B = sharp non-C1 (m >= 2), C = sharp C1
// (1 < m < 2); suffix 1/2/3 = monotone / oscillatory-convergent /
// non-decaying-oscillatory tail, "?" when undetermined.
struct AtlasRow {
    double r = 0.0;
    double cdot = 0.0;
    double c0 = 0.0;
    double c_kappa = 0.0;  // extended real
    double c_star = 0.0;   // extended real
    std::optional<double> c_hat_emp;
    TailClass tail_at_c0 = TailClass::Undetermined;
    std::string wave_type;  // e.g. "B1"
    std::string error;      // per-row failure, empty on success
};

struct AtlasOptions {
    double shoot_tol = 1e-3;
    bool with_empirical = true;
    std::vector<double> empirical_factors = {1.1, 1.25, 1.5, 2.0, 3.0};
    int max_parallel = 0;  // 0 -> hardware concurrency
};

std::vector<AtlasRow> sweep(const KineticsSpec& spec_template,
                            const std::vector<double>& r_values,
                            const AtlasOptions& opts = {});

struct Intersections {
    std::vector<double> r_kappa;  // crossings of c0 - c_kappa
    std::vector<double> r_star;   // crossings of c0 - c_star
};

// Linear-interpolated sign changes of the difference curves; rows with
// non-finite entries are skipped.
Intersections find_intersections(const std::vector<AtlasRow>& rows);

} // namespace degwave

#endif

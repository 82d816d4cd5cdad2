#ifndef DEGWAVE_PDESIM_HPP
#define DEGWAVE_PDESIM_HPP

#include <deque>
#include <optional>
#include <variant>
#include <vector>

#include "degwave/charspec.hpp"
#include "degwave/profile.hpp"
#include "degwave/tail.hpp"

namespace degwave {

struct Grid1D {
    double x_lo = 0.0, x_hi = 1.0;
    int n_cells = 100;
    double dx() const { return (x_hi - x_lo) / n_cells; }
    double x_center(int i) const { return x_lo + (i + 0.5) * dx(); }
};

// Explicit flux-form state of u_t = D (u^m)_xx - d(u) + b(u(t-r)) with
// zero-flux walls. The delay history keeps snapshots at the storage cadence
// and interpolates linearly in time.
class SimState {
public:
    SimState(const KineticsSpec& spec, Grid1D grid,
             std::vector<double> u0,
             std::function<double(double, double)> history0,  // (s, x), s in [-r, 0]
             double history_store_dt);

    double time() const { return t_; }
    const std::vector<double>& u() const { return u_; }
    const Grid1D& grid() const { return grid_; }
    double clipped_mass() const { return clipped_mass_; }

    // Largest stable explicit step at the current state.
    double cfl_limit() const;

    // One explicit update; dt above the CFL limit is a parameter error.
    void step(double dt);

    double history_at(double s, int cell) const;

private:
    KineticsSpec spec_;
    Grid1D grid_;
    std::vector<double> u_;
    std::vector<double> w_;  // scratch: u^m
    double t_ = 0.0;
    double r_ = 0.0;
    std::function<double(double, double)> history0_;
    double store_dt_ = 0.0;
    double last_store_ = 0.0;
    std::deque<std::pair<double, std::vector<double>>> history_;
    double clipped_mass_ = 0.0;

    void store_snapshot();
};

struct CompactBump {
    double height = 1.0;
    double width = 4.0;
    double center = 0.0;
};

struct ProfileTransplant {
    const WaveProfile* profile = nullptr;
    double front_at = 0.0;  // x position of the sharp edge at t = 0
};

using SimInit = std::variant<CompactBump, ProfileTransplant>;

struct Snapshot {
    double t = 0.0;
    std::vector<double> u;
};

struct FrontTrace {
    std::vector<double> times;
    std::vector<double> x_right;  // rightmost crossing of kappa/2
    std::vector<double> x_left;   // leftmost crossing of kappa/2
    std::vector<Snapshot> snapshots;
    std::vector<std::pair<double, double>> probe_series;  // (t, u(x_probe))
    double measured_speed = 0.0;  // LSQ slope of x_right over the trailing half
    double clipped_mass = 0.0;
    bool truncated = false;       // front reached the boundary margin
    double t_truncated = 0.0;
};

struct SimOptions {
    double store_dt = 0.0;        // 0 -> r/256 (or T/512 when r = 0)
    double cfl_safety = 1.0;      // multiplies the 0.4 dx^2 bound
    std::vector<double> snapshot_times;
    std::optional<double> x_probe;
    int boundary_margin_cells = 10;
};

FrontTrace run_simulation(const CharContext& ctx, const Grid1D& grid,
                          const SimInit& init, double T, const SimOptions& opts = {});

// Tail classification of the time series u(t, x_probe) after front passage.
TailReport detect_oscillation(const CharContext& ctx, const FrontTrace& trace,
                              double x_probe, double T);

} // namespace degwave

#endif

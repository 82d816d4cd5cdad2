#include "degwave/pdesim.hpp"

#include <algorithm>
#include <cmath>

namespace degwave {

SimState::SimState(const KineticsSpec& spec, Grid1D grid, std::vector<double> u0,
                   std::function<double(double, double)> history0,
                   double history_store_dt)
    : spec_(spec),
      grid_(grid),
      u_(std::move(u0)),
      w_(grid.n_cells),
      r_(spec.delay),
      history0_(std::move(history0)),
      store_dt_(history_store_dt) {
    if (grid_.n_cells < 100) throw ParamError("SimState: n_cells must be >= 100");
    if (static_cast<int>(u_.size()) != grid_.n_cells)
        throw ParamError("SimState: initial data size mismatch");
    for (double v : u_)
        if (v < 0.0) throw ParamError("SimState: initial data must be nonnegative");
    store_snapshot();
}

void SimState::store_snapshot() {
    history_.emplace_back(t_, u_);
    last_store_ = t_;
    // trim to [t - r - store_dt, t]
    while (history_.size() > 2 && history_.front().first < t_ - r_ - 2.0 * store_dt_)
        history_.pop_front();
}

double SimState::history_at(double s, int cell) const {
    if (r_ == 0.0 || s >= t_) return u_[cell];
    if (s <= 0.0 && history0_) return history0_(s, grid_.x_center(cell));
    // locate bracketing snapshots
    auto it = std::lower_bound(
        history_.begin(), history_.end(), s,
        [](const std::pair<double, std::vector<double>>& a, double v) {
            return a.first < v;
        });
    if (it == history_.begin()) return it->second[cell];
    if (it == history_.end()) return history_.back().second[cell];
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double w = (s - lo.first) / (hi.first - lo.first);
    return lo.second[cell] + w * (hi.second[cell] - lo.second[cell]);
}

double SimState::cfl_limit() const {
    double umax = 0.0;
    for (double v : u_) umax = std::max(umax, v);
    umax = std::max(umax, 1e-12);
    double dx = grid_.dx();
    double diff = 2.0 * spec_.diffusivity * spec_.m * std::pow(umax, spec_.m - 1.0);
    // local Lipschitz scale of the reaction near the state range
    double lr = 0.0;
    for (int i = 0; i <= 16; ++i) {
        double s = umax * i / 16.0;
        lr = std::max(lr, std::fabs(death_prime(spec_, s)) + std::fabs(birth_prime(spec_, s)));
    }
    return 0.4 * dx * dx / (diff + dx * dx * lr);
}

void SimState::step(double dt) {
    if (dt > cfl_limit() * (1.0 + 1e-12))
        throw ParamError("SimState::step: dt violates the CFL bound");
    int n = grid_.n_cells;
    double dx = grid_.dx();
    double D = spec_.diffusivity;
    for (int i = 0; i < n; ++i) w_[i] = std::pow(u_[i], spec_.m);

    double t_delay = t_ - r_;
    std::vector<double> un(n);
    for (int i = 0; i < n; ++i) {
        // zero-flux walls: boundary face fluxes vanish
        double flux_r = (i + 1 < n) ? (w_[i + 1] - w_[i]) / dx : 0.0;
        double flux_l = (i > 0) ? (w_[i] - w_[i - 1]) / dx : 0.0;
        double lap = D * (flux_r - flux_l) / dx;
        double ud = (r_ > 0.0) ? history_at(t_delay, i) : u_[i];
        un[i] = u_[i] + dt * (lap - death(spec_, u_[i]) + birth(spec_, std::max(ud, 0.0)));
        if (un[i] < 0.0) {
            clipped_mass_ += -un[i] * dx;
            un[i] = 0.0;
        }
    }
    u_.swap(un);
    t_ += dt;
    if (r_ > 0.0 && t_ - last_store_ >= store_dt_) store_snapshot();
}

namespace {

// Linear-interpolated crossings of the level on the cell-center samples.
void level_crossings(const Grid1D& g, const std::vector<double>& u, double level,
                     double& left, double& right, bool& found) {
    found = false;
    left = right = 0.0;
    int n = g.n_cells;
    for (int i = 0; i + 1 < n; ++i) {
        bool above = u[i] >= level, above1 = u[i + 1] >= level;
        if (above != above1) {
            double x = g.x_center(i) +
                       (level - u[i]) / (u[i + 1] - u[i]) * g.dx();
            if (!found) left = x;
            right = x;
            found = true;
        }
    }
}

} // namespace

FrontTrace run_simulation(const CharContext& ctx, const Grid1D& grid,
                          const SimInit& init, double T, const SimOptions& opts) {
    const KineticsSpec& spec = ctx.spec;
    double r = spec.delay;
    double store_dt = opts.store_dt;
    if (store_dt <= 0.0) store_dt = r > 0.0 ? r / 256.0 : T / 512.0;

    std::vector<double> u0(grid.n_cells);
    std::function<double(double, double)> hist0;
    if (std::holds_alternative<CompactBump>(init)) {
        const auto& b = std::get<CompactBump>(init);
        for (int i = 0; i < grid.n_cells; ++i) {
            double x = grid.x_center(i) - b.center;
            double s = 2.0 * x / b.width;
            u0[i] = std::fabs(s) < 1.0 ? b.height * (1.0 - s * s) : 0.0;
        }
        // history identically equal to the initial data on [-r, 0]
        std::vector<double> copy = u0;
        Grid1D g = grid;
        hist0 = [copy, g, b](double, double x) {
            double s = 2.0 * (x - b.center) / b.width;
            return std::fabs(s) < 1.0 ? b.height * (1.0 - s * s) : 0.0;
        };
    } else {
        const auto& tr = std::get<ProfileTransplant>(init);
        if (!tr.profile) throw ParamError("ProfileTransplant: missing profile");
        const WaveProfile* prof = tr.profile;
        double c = prof->speed;
        double x0 = tr.front_at;
        // rightward-moving translate u(t, x) = phi(c t - (x - x0))
        for (int i = 0; i < grid.n_cells; ++i)
            u0[i] = prof->phi(x0 - grid.x_center(i));
        hist0 = [prof, c, x0](double s, double x) {
            return prof->phi(c * s - (x - x0));
        };
    }

    SimState st(spec, grid, std::move(u0), hist0, store_dt);

    FrontTrace trace;
    double level = 0.5 * ctx.consts.kappa;
    double margin = opts.boundary_margin_cells * grid.dx();
    auto snapshot_it = opts.snapshot_times.begin();

    double record_dt = std::max(store_dt, T / 2048.0);
    double next_record = 0.0;
    while (st.time() < T) {
        double dt = std::min(st.cfl_limit() * opts.cfl_safety, T - st.time());
        st.step(dt);
        if (st.time() >= next_record) {
            next_record = st.time() + record_dt;
            double xl, xr;
            bool found;
            level_crossings(grid, st.u(), level, xl, xr, found);
            if (found) {
                trace.times.push_back(st.time());
                trace.x_left.push_back(xl);
                trace.x_right.push_back(xr);
                if (xr > grid.x_hi - margin || xl < grid.x_lo + margin) {
                    trace.truncated = true;
                    trace.t_truncated = st.time();
                    break;
                }
            }
            if (opts.x_probe) {
                int cell = std::clamp(
                    static_cast<int>((*opts.x_probe - grid.x_lo) / grid.dx()), 0,
                    grid.n_cells - 1);
                trace.probe_series.emplace_back(st.time(), st.u()[cell]);
            }
        }
        while (snapshot_it != opts.snapshot_times.end() && st.time() >= *snapshot_it) {
            trace.snapshots.push_back(Snapshot{st.time(), st.u()});
            ++snapshot_it;
        }
    }
    trace.clipped_mass = st.clipped_mass();

    // speed fit: least squares on the trailing half of the recorded trace
    std::size_t n = trace.times.size();
    if (n >= 4) {
        std::size_t half = n / 2;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t cnt = n - half;
        for (std::size_t i = half; i < n; ++i) {
            sx += trace.times[i];
            sy += trace.x_right[i];
            sxx += trace.times[i] * trace.times[i];
            sxy += trace.times[i] * trace.x_right[i];
        }
        trace.measured_speed =
            (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }
    return trace;
}

TailReport detect_oscillation(const CharContext& ctx, const FrontTrace& trace,
                              double x_probe, double T) {
    double r = ctx.spec.delay;
    TailReport rep;  // Undetermined by default
    if (trace.probe_series.empty()) return rep;

    // front passage time at the probe
    double t_pass = -1.0;
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        if (trace.x_right[i] >= x_probe) {
            t_pass = trace.times[i];
            break;
        }
    }
    if (t_pass < 0.0) return rep;
    if (r > 0.0 && T - t_pass < 10.0 * r) return rep;  // insufficient span

    const auto& series = trace.probe_series;
    auto sample = [&series](double t) {
        auto it = std::lower_bound(
            series.begin(), series.end(), t,
            [](const std::pair<double, double>& a, double v) { return a.first < v; });
        if (it == series.begin()) return it->second;
        if (it == series.end()) return series.back().second;
        const auto& hi = *it;
        const auto& lo = *(it - 1);
        double w = (t - lo.first) / (hi.first - lo.first);
        return lo.second + w * (hi.second - lo.second);
    };
    double window = r > 0.0 ? 5.0 * r : (T - t_pass) / 6.0;
    double t_lo = t_pass + 2.0 * std::max(r, 0.0);
    return classify_tail_series(sample, t_lo, series.back().first, window,
                                ctx.consts.kappa);
}

} // namespace degwave

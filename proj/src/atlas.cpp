#include "degwave/atlas.hpp"

#include <cmath>
#include <future>
#include <thread>

namespace degwave {

namespace {

AtlasRow compute_row(KineticsSpec spec, double r, const AtlasOptions& opts) {
    AtlasRow row;
    row.r = r;
    try {
        spec.delay = r;
        CharContext ctx = make_char_context(spec);
        row.c_kappa = find_c_kappa(ctx).c;
        row.c_star = find_c_star(ctx).c;
        if (ctx.consts.unimodal && r > 0.0) row.cdot = lower_bound_speed(ctx).cdot;

        ShootingResult sr = find_sharp_speed(ctx, opts.shoot_tol);
        row.c0 = sr.c0;
        if (const auto* p = std::get_if<Persistent>(&sr.outcome_at_c0))
            row.tail_at_c0 = p->tail.classification;

        if (opts.with_empirical) {
            std::vector<double> grid;
            for (double f : opts.empirical_factors) grid.push_back(f * row.c0);
            row.c_hat_emp = empirical_min_smooth_speed(ctx, grid);
        }

        const char* series = spec.m >= 2.0 ? "B" : "C";
        const char* idx = "?";
        switch (row.tail_at_c0) {
            case TailClass::MonotoneConvergent:     idx = "1"; break;
            case TailClass::OscillatoryConvergent:  idx = "2"; break;
            case TailClass::NonDecayingOscillatory: idx = "3"; break;
            case TailClass::Undetermined:           idx = "?"; break;
        }
        row.wave_type = std::string(series) + idx;
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

} // namespace

std::vector<AtlasRow> sweep(const KineticsSpec& spec_template,
                            const std::vector<double>& r_values,
                            const AtlasOptions& opts) {
    for (double r : r_values)
        if (!(r > 0.0) || !std::isfinite(r))
            throw ParamError("atlas sweep: r values must be positive and finite");

    unsigned parallel = opts.max_parallel > 0
                            ? static_cast<unsigned>(opts.max_parallel)
                            : std::max(1u, std::thread::hardware_concurrency());
    std::vector<AtlasRow> rows(r_values.size());
    std::size_t next = 0;
    while (next < r_values.size()) {
        std::size_t batch = std::min<std::size_t>(parallel, r_values.size() - next);
        std::vector<std::future<AtlasRow>> futs;
        for (std::size_t j = 0; j < batch; ++j) {
            double r = r_values[next + j];
            futs.push_back(std::async(std::launch::async, compute_row,
                                      spec_template, r, std::cref(opts)));
        }
        for (std::size_t j = 0; j < batch; ++j) rows[next + j] = futs[j].get();
        next += batch;
    }
    return rows;
}

namespace {

void collect_crossings(const std::vector<AtlasRow>& rows,
                       double AtlasRow::* column, std::vector<double>& out) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const AtlasRow& a = rows[i - 1];
        const AtlasRow& b = rows[i];
        if (!a.error.empty() || !b.error.empty()) continue;
        double fa = a.c0 - a.*column;
        double fb = b.c0 - b.*column;
        if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
        if (fa == 0.0) out.push_back(a.r);
        if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0))
            out.push_back(a.r + (b.r - a.r) * (-fa) / (fb - fa));
    }
}

} // namespace

Intersections find_intersections(const std::vector<AtlasRow>& rows) {
    Intersections is;
    collect_crossings(rows, &AtlasRow::c_kappa, is.r_kappa);
    collect_crossings(rows, &AtlasRow::c_star, is.r_star);
    return is;
}

} // namespace degwave

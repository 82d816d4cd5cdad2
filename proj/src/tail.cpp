#include "degwave/tail.hpp"

#include <algorithm>
#include <cmath>

#include "degwave/errors.hpp"

namespace degwave {

const char* tail_class_name(TailClass c) {
    switch (c) {
        case TailClass::MonotoneConvergent:     return "MonotoneConvergent";
        case TailClass::OscillatoryConvergent:  return "OscillatoryConvergent";
        case TailClass::NonDecayingOscillatory: return "NonDecayingOscillatory";
        case TailClass::Undetermined:           return "Undetermined";
    }
    return "Undetermined";
}

TailReport classify_tail_series(const std::function<double(double)>& sample,
                                double t_lo, double t_hi,
                                double window, double kappa) {
    if (!(window > 0.0)) throw ParamError("classify_tail: window must be > 0");
    TailReport rep;
    int nwin = static_cast<int>(std::floor((t_hi - t_lo) / window));
    if (nwin < 3) return rep;  // Undetermined
    nwin = std::min(nwin, 8);
    double start = t_hi - nwin * window;

    const int samples_per_window = 256;
    double prev = sample(start) - kappa;
    for (int w = 0; w < nwin; ++w) {
        double wmax = 0.0;
        int sc = 0;
        for (int i = 1; i <= samples_per_window; ++i) {
            double t = start + w * window + window * i / samples_per_window;
            double v = sample(t) - kappa;
            if (prev * v < 0.0) ++sc;
            if (v != 0.0) prev = v;
            wmax = std::max(wmax, std::fabs(v));
        }
        rep.window_sign_changes.push_back(sc);
        rep.window_max.push_back(wmax);
        rep.sign_changes_total += sc;
    }
    rep.windows = nwin;

    double tmin = sample(t_hi - window), tmax = tmin;
    for (int i = 1; i <= samples_per_window; ++i) {
        double v = sample(t_hi - window + window * i / samples_per_window);
        tmin = std::min(tmin, v);
        tmax = std::max(tmax, v);
    }
    rep.tail_min = tmin;
    rep.tail_max = tmax;

    double first = rep.window_max.front(), last = rep.window_max.back();
    rep.envelope_ratio = first > 0.0 ? last / first : 0.0;

    int sc_min = *std::min_element(rep.window_sign_changes.begin(),
                                   rep.window_sign_changes.end());
    bool maxima_nonincreasing = true;
    for (int w = 1; w < nwin; ++w)
        if (rep.window_max[w] > rep.window_max[w - 1] * (1.0 + 1e-9) + 1e-12 * kappa)
            maxima_nonincreasing = false;

    if (rep.sign_changes_total == 0 && maxima_nonincreasing)
        rep.classification = TailClass::MonotoneConvergent;
    else if (sc_min >= 2 && rep.envelope_ratio < 0.8)
        rep.classification = TailClass::OscillatoryConvergent;
    else if (sc_min >= 2 && rep.envelope_ratio >= 0.8 && nwin >= 5)
        rep.classification = TailClass::NonDecayingOscillatory;
    else
        rep.classification = TailClass::Undetermined;
    return rep;
}

} // namespace degwave

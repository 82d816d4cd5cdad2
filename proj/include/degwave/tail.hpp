#ifndef DEGWAVE_TAIL_HPP
#define DEGWAVE_TAIL_HPP

#include <functional>
#include <vector>

namespace degwave {

enum class TailClass {
    MonotoneConvergent,
    OscillatoryConvergent,
    NonDecayingOscillatory,
    Undetermined,
};

const char* tail_class_name(TailClass c);

struct TailReport {
    TailClass classification = TailClass::Undetermined;
    int windows = 0;                      // complete analysis windows used
    int sign_changes_total = 0;           // strict sign changes of phi - kappa
    std::vector<int> window_sign_changes;
    std::vector<double> window_max;       // per-window maxima of |phi - kappa|
    double envelope_ratio = 0.0;          // last window max / first window max
    double tail_min = 0.0, tail_max = 0.0;  // over the last window
};

// Classification rules on trailing windows of length `window` over
// [t_lo, t_hi] (up to the 8 most recent complete windows, at least 3):
//   MonotoneConvergent:      no sign change, window maxima nonincreasing
//   OscillatoryConvergent:   >= 2 sign changes per window, envelope ratio < 0.8
//   NonDecayingOscillatory:  >= 2 sign changes per window, ratio >= 0.8,
//                            sustained over >= 5 windows
//   Undetermined otherwise (or with < 3 complete windows).
TailReport classify_tail_series(const std::function<double(double)>& sample,
                                double t_lo, double t_hi,
                                double window, double kappa);

} // namespace degwave

#endif

#ifndef DEGWAVE_SVG_HPP
#define DEGWAVE_SVG_HPP

#include <string>
#include <vector>

namespace degwave {

// Minimal static line chart, styled after the usual wave-profile figures:
// solid curves, a dashed horizontal marker (the kappa line), log or linear
// axes are the caller's concern (data comes in pre-transformed).
struct SvgCurve {
    std::vector<double> x, y;
    std::string stroke = "#1f4e9c";
    std::string dash;       // e.g. "6,4" for dashed, empty for solid
    std::string label;
};

struct SvgChart {
    int width = 720, height = 480;
    std::string x_label, y_label, title;
    std::vector<SvgCurve> curves;
    std::vector<double> hlines;  // dashed horizontal markers

    std::string render() const;
};

} // namespace degwave

#endif

#include "degwave/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace degwave {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

} // namespace

std::string SvgChart::render() const {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& c : curves) {
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
            xmin = std::min(xmin, c.x[i]);
            xmax = std::max(xmax, c.x[i]);
            ymin = std::min(ymin, c.y[i]);
            ymax = std::max(ymax, c.y[i]);
        }
    }
    for (double h : hlines) {
        ymin = std::min(ymin, h);
        ymax = std::max(ymax, h);
    }
    if (!(xmax > xmin)) { xmin = 0; xmax = 1; }
    if (!(ymax > ymin)) { ymin = 0; ymax = 1; }
    double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const int ml = 60, mr = 20, mt = 36, mb = 44;
    double pw = width - ml - mr, ph = height - mt - mb;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto sy = [&](double y) { return mt + (1.0 - (y - ymin) / (ymax - ymin)) * ph; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
       << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!title.empty())
        os << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
           << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";

    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
       << "\" y2=\"" << mt + ph << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
       << mt + ph << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        double x = xmin + (xmax - xmin) * i / 5;
        double y = ymin + (ymax - ymin) * i / 5;
        os << "<text x=\"" << sx(x) << "\" y=\"" << mt + ph + 16
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"10\">"
           << fmt(x) << "</text>\n";
        os << "<text x=\"" << ml - 6 << "\" y=\"" << sy(y) + 3
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">"
           << fmt(y) << "</text>\n";
    }
    if (!x_label.empty())
        os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 8
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           << x_label << "</text>\n";
    if (!y_label.empty())
        os << "<text x=\"14\" y=\"" << mt + ph / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           << "transform=\"rotate(-90 14 " << mt + ph / 2 << ")\">" << y_label
           << "</text>\n";

    for (double h : hlines)
        os << "<line x1=\"" << ml << "\" y1=\"" << sy(h) << "\" x2=\"" << ml + pw
           << "\" y2=\"" << sy(h)
           << "\" stroke=\"#555555\" stroke-width=\"1\" stroke-dasharray=\"6,4\"/>\n";

    int label_row = 0;
    for (const auto& c : curves) {
        os << "<polyline fill=\"none\" stroke=\"" << c.stroke << "\" stroke-width=\"1.5\"";
        if (!c.dash.empty()) os << " stroke-dasharray=\"" << c.dash << "\"";
        os << " points=\"";
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            if (!std::isfinite(c.x[i]) || !std::isfinite(c.y[i])) continue;
            os << fmt(sx(c.x[i])) << "," << fmt(sy(c.y[i])) << " ";
        }
        os << "\"/>\n";
        if (!c.label.empty()) {
            os << "<text x=\"" << ml + pw - 8 << "\" y=\"" << mt + 14 + 14 * label_row
               << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
               << c.stroke << "\">" << c.label << "</text>\n";
            ++label_row;
        }
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace degwave

#include "homsim/svgplot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace homsim {

namespace {

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void take(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    bool valid() const { return lo <= hi; }
    void pad() {
        if (!valid()) {
            lo = 0.0;
            hi = 1.0;
            return;
        }
        if (lo == hi) {
            lo -= 0.5;
            hi += 0.5;
        }
        const double margin = 0.05 * (hi - lo);
        lo -= margin;
        hi += margin;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void write_svg_plot(std::ostream& os, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& y2_label,
                    const std::vector<SvgSeries>& series, int width,
                    int height) {
    const double ml = 72, mr = 72, mt = 42, mb = 52;
    const double pw = width - ml - mr;
    const double ph = height - mt - mb;

    Range xr, yr, y2r;
    bool has_y2 = false;
    for (const auto& s : series) {
        for (const auto& [x, y] : s.points) {
            xr.take(x);
            if (s.axis == 0) {
                yr.take(y);
            } else {
                y2r.take(y);
                has_y2 = true;
            }
        }
    }
    xr.pad();
    yr.pad();
    y2r.pad();

    const auto px = [&](double x) {
        return ml + pw * (x - xr.lo) / (xr.hi - xr.lo);
    };
    const auto py = [&](double y, int axis) {
        const Range& r = axis == 0 ? yr : y2r;
        return mt + ph * (1.0 - (y - r.lo) / (r.hi - r.lo));
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
       << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' '
       << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"15\">"
       << title << "</text>\n";
    os << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << pw
       << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

    const int nticks = 6;
    for (int i = 0; i <= nticks; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / nticks;
        const double gx = px(fx);
        os << "<line x1=\"" << gx << "\" y1=\"" << mt + ph << "\" x2=\"" << gx
           << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << gx << "\" y=\"" << mt + ph + 18
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"11\">"
           << num(fx) << "</text>\n";
        const double fy = yr.lo + (yr.hi - yr.lo) * i / nticks;
        const double gy = py(fy, 0);
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << gy << "\" x2=\"" << ml
           << "\" y2=\"" << gy << "\" stroke=\"#444\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << gy + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
              "font-size=\"11\">"
           << num(fy) << "</text>\n";
        if (has_y2) {
            const double fy2 = y2r.lo + (y2r.hi - y2r.lo) * i / nticks;
            const double gy2 = py(fy2, 1);
            os << "<line x1=\"" << ml + pw << "\" y1=\"" << gy2 << "\" x2=\""
               << ml + pw + 5 << "\" y2=\"" << gy2 << "\" stroke=\"#444\"/>\n";
            os << "<text x=\"" << ml + pw + 8 << "\" y=\"" << gy2 + 4
               << "\" text-anchor=\"start\" font-family=\"sans-serif\" "
                  "font-size=\"11\">"
               << num(fy2) << "</text>\n";
        }
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"12\">"
       << x_label << "</text>\n";
    os << "<text x=\"18\" y=\"" << mt + ph / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"12\" transform=\"rotate(-90 18 "
       << mt + ph / 2 << ")\">" << y_label << "</text>\n";
    if (has_y2 && !y2_label.empty()) {
        os << "<text x=\"" << width - 16 << "\" y=\"" << mt + ph / 2
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
              "font-size=\"12\" transform=\"rotate(90 "
           << width - 16 << ' ' << mt + ph / 2 << ")\">" << y2_label
           << "</text>\n";
    }

    double ly = mt + 16;
    for (const auto& s : series) {
        if (s.line && s.points.size() > 1) {
            os << "<polyline fill=\"none\" stroke=\"" << s.color
               << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& [x, y] : s.points) {
                os << px(x) << ',' << py(y, s.axis) << ' ';
            }
            os << "\"/>\n";
        }
        if (s.markers) {
            for (const auto& [x, y] : s.points) {
                os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y, s.axis)
                   << "\" r=\"2.4\" fill=\"" << s.color << "\"/>\n";
            }
        }
        if (!s.label.empty()) {
            os << "<rect x=\"" << ml + 10 << "\" y=\"" << ly - 8
               << "\" width=\"14\" height=\"3\" fill=\"" << s.color << "\"/>\n";
            os << "<text x=\"" << ml + 30 << "\" y=\"" << ly
               << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.label
               << "</text>\n";
            ly += 16;
        }
    }
    os << "</svg>\n";
}

}  // namespace homsim

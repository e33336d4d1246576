#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace homsim {

/// One polyline/marker series in plot coordinates.
struct SvgSeries {
    std::string label;
    std::string color = "#1f1f1f";
    bool line = true;
    bool markers = false;
    /// 0 = left axis, 1 = right axis (second scale drawn when used).
    int axis = 0;
    std::vector<std::pair<double, double>> points;
};

/// Minimal static plot: frame, ticks, optional right axis, series, legend.
void write_svg_plot(std::ostream& os, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::string& y2_label,
                    const std::vector<SvgSeries>& series, int width = 880,
                    int height = 540);

}  // namespace homsim

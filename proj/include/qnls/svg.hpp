#pragma once

#include <string>
#include <vector>

namespace qnls {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Minimal static SVG line chart. log_x/log_y switch the corresponding axis
/// to log10; nonpositive samples are dropped on log axes.
std::string svg_line_plot(const std::string& title,
                          const std::vector<PlotSeries>& series,
                          bool log_x = false, bool log_y = false);

struct PhaseCell {
    double x; // first swept parameter
    double y; // second swept parameter
    std::string category;
};

/// Colored-cell phase diagram for a two-parameter sweep.
std::string svg_phase_diagram(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PhaseCell>& cells);

} // namespace qnls

#include "qnls/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

namespace qnls {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMargin = 56;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            lo -= 1.0;
            hi += 1.0;
        }
        const double d = 0.05 * (hi - lo);
        lo -= d;
        hi += d;
    }
};

} // namespace

std::string svg_line_plot(const std::string& title,
                          const std::vector<PlotSeries>& series, bool log_x,
                          bool log_y) {
    auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
    auto ty = [&](double v) { return log_y ? std::log10(v) : v; };

    Range rx, ry;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((log_x && !(s.x[i] > 0.0)) || (log_y && !(s.y[i] > 0.0)))
                continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            rx.add(tx(s.x[i]));
            ry.add(ty(s.y[i]));
        }
    if (!std::isfinite(rx.lo)) {
        rx = {0.0, 1.0};
        ry = {0.0, 1.0};
    }
    rx.pad();
    ry.pad();

    auto px = [&](double v) {
        return kMargin + (tx(v) - rx.lo) / (rx.hi - rx.lo) * (kWidth - 2 * kMargin);
    };
    auto py = [&](double v) {
        return kHeight - kMargin -
               (ty(v) - ry.lo) / (ry.hi - ry.lo) * (kHeight - 2 * kMargin);
    };

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
       << "' height='" << kHeight << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' "
          "font-family='monospace' font-size='15'>"
       << title << "</text>\n";
    // frame
    os << "<rect x='" << kMargin << "' y='" << kMargin << "' width='"
       << kWidth - 2 * kMargin << "' height='" << kHeight - 2 * kMargin
       << "' fill='none' stroke='#333'/>\n";
    // axis ticks
    for (int i = 0; i <= 4; ++i) {
        const double fx = rx.lo + (rx.hi - rx.lo) * i / 4.0;
        const double fy = ry.lo + (ry.hi - ry.lo) * i / 4.0;
        const double X = kMargin + (kWidth - 2.0 * kMargin) * i / 4.0;
        const double Y = kHeight - kMargin - (kHeight - 2.0 * kMargin) * i / 4.0;
        const double vx = log_x ? std::pow(10.0, fx) : fx;
        const double vy = log_y ? std::pow(10.0, fy) : fy;
        os << "<text x='" << X << "' y='" << kHeight - kMargin + 18
           << "' text-anchor='middle' font-family='monospace' font-size='11'>"
           << num(vx) << "</text>\n";
        os << "<text x='" << kMargin - 6 << "' y='" << Y + 4
           << "' text-anchor='end' font-family='monospace' font-size='11'>"
           << num(vy) << "</text>\n";
    }
    int color = 0;
    for (const auto& s : series) {
        os << "<polyline fill='none' stroke='" << kPalette[color % 6]
           << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if ((log_x && !(s.x[i] > 0.0)) || (log_y && !(s.y[i] > 0.0)))
                continue;
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            os << px(s.x[i]) << "," << py(s.y[i]) << " ";
        }
        os << "'/>\n";
        os << "<text x='" << kWidth - kMargin - 8 << "' y='"
           << kMargin + 16 + 16 * color
           << "' text-anchor='end' font-family='monospace' font-size='12' fill='"
           << kPalette[color % 6] << "'>" << s.label << "</text>\n";
        ++color;
    }
    os << "</svg>\n";
    return os.str();
}

std::string svg_phase_diagram(const std::string& title,
                              const std::string& x_label,
                              const std::string& y_label,
                              const std::vector<PhaseCell>& cells) {
    std::map<std::string, std::string> colors = {
        {"completed", "#2ca02c"},
        {"blowup_detected", "#d62728"},
        {"step_collapse", "#ff7f0e"},
        {"boundary_contaminated", "#9467bd"},
    };
    std::vector<double> xs, ys;
    for (const auto& c : cells) {
        xs.push_back(c.x);
        ys.push_back(c.y);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    const double cw = (kWidth - 2.0 * kMargin) / std::max<std::size_t>(xs.size(), 1);
    const double ch = (kHeight - 2.0 * kMargin) / std::max<std::size_t>(ys.size(), 1);

    std::ostringstream os;
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
       << "' height='" << kHeight << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << kWidth / 2 << "' y='24' text-anchor='middle' "
          "font-family='monospace' font-size='15'>"
       << title << "</text>\n";
    for (const auto& c : cells) {
        const auto ix = std::lower_bound(xs.begin(), xs.end(), c.x) - xs.begin();
        const auto iy = std::lower_bound(ys.begin(), ys.end(), c.y) - ys.begin();
        const auto it = colors.find(c.category);
        const std::string fill = it == colors.end() ? "#aaaaaa" : it->second;
        os << "<rect x='" << kMargin + ix * cw << "' y='"
           << kHeight - kMargin - (iy + 1) * ch << "' width='" << cw
           << "' height='" << ch << "' fill='" << fill
           << "' stroke='white'/>\n";
    }
    for (std::size_t i = 0; i < xs.size(); ++i)
        os << "<text x='" << kMargin + (i + 0.5) * cw << "' y='"
           << kHeight - kMargin + 18
           << "' text-anchor='middle' font-family='monospace' font-size='11'>"
           << num(xs[i]) << "</text>\n";
    for (std::size_t i = 0; i < ys.size(); ++i)
        os << "<text x='" << kMargin - 6 << "' y='"
           << kHeight - kMargin - (i + 0.5) * ch + 4
           << "' text-anchor='end' font-family='monospace' font-size='11'>"
           << num(ys[i]) << "</text>\n";
    os << "<text x='" << kWidth / 2 << "' y='" << kHeight - 12
       << "' text-anchor='middle' font-family='monospace' font-size='12'>"
       << x_label << "</text>\n";
    os << "<text x='16' y='" << kHeight / 2
       << "' text-anchor='middle' font-family='monospace' font-size='12' "
          "transform='rotate(-90 16 "
       << kHeight / 2 << ")'>" << y_label << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

} // namespace qnls

#include "biphoton/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

namespace biphoton {

namespace {

constexpr int kW = 720, kH = 480;
constexpr int kL = 70, kR = 20, kT = 30, kB = 50;
const char* kColors[] = {"#1f6fb4", "#c23b22", "#2e8b57", "#7a5195", "#d98b00", "#4b4b4b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

void render_svg(std::ostream& out, const FigureTable& t) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
        << "\" viewBox=\"0 0 " << kW << " " << kH << "\">\n";
    out << "<rect width=\"" << kW << "\" height=\"" << kH << "\" fill=\"white\"/>\n";
    if (t.columns.size() < 2 || t.columns[0].empty()) {
        out << "</svg>\n";
        return;
    }
    const auto& xs = t.columns[0];
    double xmin = *std::min_element(xs.begin(), xs.end());
    double xmax = *std::max_element(xs.begin(), xs.end());
    double ymin = 1e300, ymax = -1e300;
    for (std::size_t c = 1; c < t.columns.size(); ++c)
        for (double v : t.columns[c]) {
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax == ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return kL + (x - xmin) / (xmax - xmin) * (kW - kL - kR); };
    auto py = [&](double y) { return kH - kB - (y - ymin) / (ymax - ymin) * (kH - kT - kB); };

    // axes and ticks
    out << "<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">\n";
    out << "<path d=\"M " << kL << " " << kT << " L " << kL << " " << (kH - kB) << " L "
        << (kW - kR) << " " << (kH - kB) << "\"/>\n</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        out << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << (kH - kB) << "\" x2=\"" << num(px(xv))
            << "\" y2=\"" << (kH - kB + 4) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << num(px(xv)) << "\" y=\"" << (kH - kB + 16)
            << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        out << "<line x1=\"" << (kL - 4) << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << kL
            << "\" y2=\"" << num(py(yv)) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << (kL - 7) << "\" y=\"" << num(py(yv) + 4)
            << "\" text-anchor=\"end\">" << num(yv) << "</text>\n";
    }
    out << "<text x=\"" << (kL + (kW - kL - kR) / 2) << "\" y=\"" << (kH - 14)
        << "\" text-anchor=\"middle\">" << t.column_names[0] << "</text>\n";
    out << "</g>\n";

    for (std::size_t c = 1; c < t.columns.size(); ++c) {
        const char* color = kColors[(c - 1) % 6];
        if (static_cast<int>(c) == t.points_column) {
            out << "<g fill=\"" << color << "\">\n";
            for (std::size_t i = 0; i < xs.size(); ++i)
                out << "<circle cx=\"" << num(px(xs[i])) << "\" cy=\"" << num(py(t.columns[c][i]))
                    << "\" r=\"3\"/>\n";
            out << "</g>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
            for (std::size_t i = 0; i < xs.size(); ++i)
                out << num(px(xs[i])) << "," << num(py(t.columns[c][i])) << " ";
            out << "\"/>\n";
        }
        out << "<text font-family=\"sans-serif\" font-size=\"12\" x=\"" << (kL + 10) << "\" y=\""
            << (kT + 16 * c) << "\" fill=\"" << color << "\">" << t.column_names[c] << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace biphoton

// Minimal deterministic SVG line plots for trajectories: polylines, axis
// ticks and point markers, with fixed-format numeric output so identical
// inputs yield byte-identical documents.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bohlin/transforms.hpp"

namespace bohlin {

struct SvgOptions {
    int width = 640;
    int height = 640;
    int margin = 40;
    std::string stroke = "#1f6fb2";
    std::vector<cplx> markers;  // drawn as small circles (e.g. the focus)
};

namespace detail {

inline std::string svg_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v == 0.0 ? 0.0 : v);  // normalize -0
    return buf;
}

}  // namespace detail

/// Plots the first complex slot of every state as a polyline in the plane.
inline std::string emit_svg(const Trajectory& traj, const SvgOptions& opt = {}) {
    if (traj.empty()) throw std::invalid_argument("emit_svg: empty trajectory");
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& st : traj.states) {
        xmin = std::min(xmin, st.coords[0]);
        xmax = std::max(xmax, st.coords[0]);
        ymin = std::min(ymin, st.coords[1]);
        ymax = std::max(ymax, st.coords[1]);
    }
    for (const auto& m : opt.markers) {
        xmin = std::min(xmin, m.real());
        xmax = std::max(xmax, m.real());
        ymin = std::min(ymin, m.imag());
        ymax = std::max(ymax, m.imag());
    }
    const double padx = std::max(1e-9, 0.05 * (xmax - xmin));
    const double pady = std::max(1e-9, 0.05 * (ymax - ymin));
    xmin -= padx;
    xmax += padx;
    ymin -= pady;
    ymax += pady;
    const double sx = (opt.width - 2.0 * opt.margin) / (xmax - xmin);
    const double sy = (opt.height - 2.0 * opt.margin) / (ymax - ymin);
    auto X = [&](double x) { return opt.margin + (x - xmin) * sx; };
    auto Y = [&](double y) { return opt.height - opt.margin - (y - ymin) * sy; };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
       << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    // axes through the origin when visible, else along the frame edge
    const double ax = (xmin < 0 && 0 < xmax) ? 0.0 : xmin;
    const double ay = (ymin < 0 && 0 < ymax) ? 0.0 : ymin;
    os << "<line x1=\"" << detail::svg_num(X(xmin)) << "\" y1=\"" << detail::svg_num(Y(ay))
       << "\" x2=\"" << detail::svg_num(X(xmax)) << "\" y2=\"" << detail::svg_num(Y(ay))
       << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    os << "<line x1=\"" << detail::svg_num(X(ax)) << "\" y1=\"" << detail::svg_num(Y(ymin))
       << "\" x2=\"" << detail::svg_num(X(ax)) << "\" y2=\"" << detail::svg_num(Y(ymax))
       << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    // five ticks per axis with value labels
    for (int k = 0; k <= 4; ++k) {
        const double xv = xmin + k * (xmax - xmin) / 4.0;
        const double yv = ymin + k * (ymax - ymin) / 4.0;
        os << "<line x1=\"" << detail::svg_num(X(xv)) << "\" y1=\"" << detail::svg_num(Y(ay) - 3)
           << "\" x2=\"" << detail::svg_num(X(xv)) << "\" y2=\"" << detail::svg_num(Y(ay) + 3)
           << "\" stroke=\"#888\"/>\n";
        os << "<text x=\"" << detail::svg_num(X(xv)) << "\" y=\"" << detail::svg_num(Y(ay) + 16)
           << "\" font-size=\"10\" text-anchor=\"middle\">" << detail::svg_num(xv) << "</text>\n";
        os << "<line x1=\"" << detail::svg_num(X(ax) - 3) << "\" y1=\"" << detail::svg_num(Y(yv))
           << "\" x2=\"" << detail::svg_num(X(ax) + 3) << "\" y2=\"" << detail::svg_num(Y(yv))
           << "\" stroke=\"#888\"/>\n";
        os << "<text x=\"" << detail::svg_num(X(ax) + 6) << "\" y=\"" << detail::svg_num(Y(yv) - 2)
           << "\" font-size=\"10\">" << detail::svg_num(yv) << "</text>\n";
    }
    os << "<polyline fill=\"none\" stroke=\"" << opt.stroke << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (i) os << ' ';
        os << detail::svg_num(X(traj.states[i].coords[0])) << ','
           << detail::svg_num(Y(traj.states[i].coords[1]));
    }
    os << "\"/>\n";
    for (const auto& m : opt.markers)
        os << "<circle cx=\"" << detail::svg_num(X(m.real())) << "\" cy=\""
           << detail::svg_num(Y(m.imag())) << "\" r=\"3\" fill=\"#c23\"/>\n";
    os << "</svg>\n";
    return os.str();
}

inline void write_svg(const Trajectory& traj, const std::string& path, const SvgOptions& opt = {}) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_svg: cannot open " + path);
    os << emit_svg(traj, opt);
}

}  // namespace bohlin

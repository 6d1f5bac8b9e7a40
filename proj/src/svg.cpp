#include "vgrd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace vgrd {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// round tick spacing to 1/2/5 * 10^k
double nice_step(double span, int target) {
    const double raw = span / std::max(1, target);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag * (1 + 1e-12)) return m * mag;
    return 10.0 * mag;
}

} // namespace

void LinePlot::add_series(const std::string& name, const std::vector<double>& x,
                          const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("LinePlot: x/y size mismatch");
    series_.push_back({name, x, y});
}

void LinePlot::write(const std::string& path) const {
    const double width = 720, height = 480;
    const double ml = 72, mr = 160, mt = 40, mb = 56;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series_) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double yv = s.y[i];
            if (log_y_ && !(yv > 0.0)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            const double ty = log_y_ ? std::log10(yv) : yv;
            ymin = std::min(ymin, ty);
            ymax = std::max(ymax, ty);
        }
    }
    if (!(xmin <= xmax)) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (xmax - xmin < 1e-30) { xmin -= 0.5; xmax += 0.5; }
    if (ymax - ymin < 1e-30) { ymin -= 0.5; ymax += 0.5; }

    const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double ty) { return mt + ph - (ty - ymin) / (ymax - ymin) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("LinePlot: cannot open " + path);

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">"
        << title_ << "</text>\n";

    // axes
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
        << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";

    const double xstep = nice_step(xmax - xmin, 8);
    for (double t = std::ceil(xmin / xstep) * xstep; t <= xmax + 1e-12 * xstep;
         t += xstep) {
        const double x = px(t);
        out << "<line x1=\"" << fmt(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << fmt(x) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"11\">"
            << fmt(t) << "</text>\n";
    }
    if (log_y_) {
        for (double t = std::ceil(ymin); t <= std::floor(ymax) + 1e-12; t += 1.0) {
            const double y = py(t);
            out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(y) << "\" x2=\"" << ml
                << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(y + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
                   "font-size=\"11\">1e"
                << fmt(t) << "</text>\n";
        }
    } else {
        const double ystep = nice_step(ymax - ymin, 8);
        for (double t = std::ceil(ymin / ystep) * ystep; t <= ymax + 1e-12 * ystep;
             t += ystep) {
            const double y = py(t);
            out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(y) << "\" x2=\"" << ml
                << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n";
            out << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(y + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
                   "font-size=\"11\">"
                << fmt(t) << "</text>\n";
        }
    }

    // axis labels
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << xlabel_ << "</text>\n";
    out << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 "
        << mt + ph / 2 << ")\">" << ylabel_ << "</text>\n";

    // series
    for (std::size_t s = 0; s < series_.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series_[s].x.size(); ++i) {
            const double yv = series_[s].y[i];
            if (log_y_ && !(yv > 0.0)) continue;
            const double ty = log_y_ ? std::log10(yv) : yv;
            out << fmt(px(series_[s].x[i])) << "," << fmt(py(ty)) << " ";
        }
        out << "\"/>\n";
        const double ly = mt + 16 + 18 * static_cast<double>(s);
        out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
            << ml + pw + 34 << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << ml + pw + 40 << "\" y=\"" << fmt(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series_[s].name
            << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace vgrd

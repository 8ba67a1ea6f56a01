#include "preempt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace preempt::svg {

namespace {

constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

// "Nice" tick step covering span with roughly `target` intervals.
double nice_step(double span, int target) {
    if (!(span > 0.0)) return 1.0;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    const double nice = frac < 1.5 ? 1.0 : frac < 3.0 ? 2.0 : frac < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(4) << v;
    return os.str();
}

struct Frame {
    double x0, x1, y0, y1;
    double w, h;
    double px(double x) const { return kLeft + (x - x0) / (x1 - x0) * (w - kLeft - kRight); }
    double py(double y) const { return h - kBottom - (y - y0) / (y1 - y0) * (h - kTop - kBottom); }
};

void header(std::ostringstream& os, int w, int h, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
       << w << ' ' << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << escape(title)
       << "</text>\n";
}

void y_axis(std::ostringstream& os, const Frame& f, const std::string& label) {
    const double step = nice_step(f.y1 - f.y0, 5);
    for (double t = std::ceil(f.y0 / step) * step; t <= f.y1 + 1e-12; t += step) {
        const double y = f.py(t);
        os << "<line x1=\"" << kLeft << "\" x2=\"" << f.w - kRight << "\" y1=\"" << y << "\" y2=\"" << y
           << "\" stroke=\"#e5e5e5\"/>\n";
        os << "<text x=\"" << kLeft - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">"
           << fmt(std::fabs(t) < 1e-12 ? 0.0 : t) << "</text>\n";
    }
    os << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft << "\" y1=\"" << kTop << "\" y2=\"" << f.h - kBottom
       << "\" stroke=\"black\"/>\n";
    os << "<text transform=\"translate(18," << (kTop + f.h - kBottom) / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
       << escape(label) << "</text>\n";
}

}  // namespace

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string scatter(const std::vector<Point>& points, const std::vector<Curve>& curves, const ScatterOptions& opts) {
    const auto tx = [&](double x) { return opts.log_x ? std::log10(x) : x; };
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& p : points) {
        x0 = std::min(x0, tx(p.x));
        x1 = std::max(x1, tx(p.x));
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    if (points.empty()) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
    constexpr int kSamples = 120;
    std::vector<std::vector<Point>> traced;
    for (const auto& c : curves) {
        std::vector<Point> line;
        for (int i = 0; i <= kSamples; ++i) {
            const double u = x0 + (x1 - x0) * i / kSamples;
            const double x = opts.log_x ? std::pow(10.0, u) : u;
            const double y = c.f(x);
            if (!std::isfinite(y)) continue;
            line.push_back({u, y});
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
        traced.push_back(std::move(line));
    }
    const double xpad = (x1 - x0) * 0.05 + (x1 == x0 ? 0.5 : 0.0);
    const double ypad = (y1 - y0) * 0.08 + (y1 == y0 ? 0.5 : 0.0);
    const Frame f{x0 - xpad, x1 + xpad, y0 - ypad, y1 + ypad, static_cast<double>(opts.width),
                  static_cast<double>(opts.height)};

    std::ostringstream os;
    os << std::setprecision(6);
    header(os, opts.width, opts.height, opts.title);
    y_axis(os, f, opts.y_label);
    const double step = nice_step(f.x1 - f.x0, 6);
    for (double t = std::ceil(f.x0 / step) * step; t <= f.x1 + 1e-12; t += step) {
        const double x = f.px(t);
        os << "<line x1=\"" << x << "\" x2=\"" << x << "\" y1=\"" << f.h - kBottom << "\" y2=\"" << f.h - kBottom + 5
           << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << x << "\" y=\"" << f.h - kBottom + 18 << "\" text-anchor=\"middle\">"
           << (opts.log_x ? "1e" + fmt(t) : fmt(t)) << "</text>\n";
    }
    os << "<line x1=\"" << kLeft << "\" x2=\"" << f.w - kRight << "\" y1=\"" << f.h - kBottom << "\" y2=\""
       << f.h - kBottom << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << (kLeft + f.w - kRight) / 2 << "\" y=\"" << f.h - 15 << "\" text-anchor=\"middle\">"
       << escape(opts.x_label) << "</text>\n";

    for (std::size_t i = 0; i < traced.size(); ++i) {
        if (traced[i].empty()) continue;
        const char* colour = kPalette[(i + 1) % 5];
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (const auto& p : traced[i]) os << f.px(p.x) << ',' << f.py(p.y) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << f.w - kRight - 4 << "\" y=\"" << kTop + 14 + 16 * static_cast<double>(i)
           << "\" text-anchor=\"end\" fill=\"" << colour << "\">" << escape(curves[i].label) << "</text>\n";
    }
    for (const auto& p : points) {
        os << "<circle cx=\"" << f.px(tx(p.x)) << "\" cy=\"" << f.py(p.y) << "\" r=\"4\" fill=\"" << kPalette[0]
           << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

std::string bar_chart(const std::vector<Bar>& bars, const BarOptions& opts) {
    double lo = 0.0, hi = 0.0;
    for (const auto& b : bars) {
        lo = std::min(lo, b.value - b.error);
        hi = std::max(hi, b.value + b.error);
    }
    if (hi == lo) hi = lo + 1.0;
    const double pad = (hi - lo) * 0.08;
    const Frame f{0.0, 1.0, lo < 0.0 ? lo - pad : 0.0, hi + pad, static_cast<double>(opts.width),
                  static_cast<double>(opts.height)};

    std::ostringstream os;
    os << std::setprecision(6);
    header(os, opts.width, opts.height, opts.title);
    y_axis(os, f, opts.y_label);
    const double base = f.py(0.0);
    const double slot = (f.w - kLeft - kRight) / std::max<double>(1.0, static_cast<double>(bars.size()));
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const auto& b = bars[i];
        const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
        const double top = f.py(b.value);
        const double bw = slot * 0.6;
        os << "<rect x=\"" << cx - bw / 2 << "\" y=\"" << std::min(top, base) << "\" width=\"" << bw
           << "\" height=\"" << std::fabs(base - top) << "\" fill=\"" << kPalette[i % 5] << "\"/>\n";
        if (b.error > 0.0) {
            const double e0 = f.py(b.value - b.error);
            const double e1 = f.py(b.value + b.error);
            os << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << e0 << "\" y2=\"" << e1
               << "\" stroke=\"black\"/>\n";
            for (double e : {e0, e1}) {
                os << "<line x1=\"" << cx - 8 << "\" x2=\"" << cx + 8 << "\" y1=\"" << e << "\" y2=\"" << e
                   << "\" stroke=\"black\"/>\n";
            }
        }
        os << "<text x=\"" << cx << "\" y=\"" << f.h - kBottom + 18 << "\" text-anchor=\"middle\">"
           << escape(b.label) << "</text>\n";
    }
    os << "<line x1=\"" << kLeft << "\" x2=\"" << f.w - kRight << "\" y1=\"" << base << "\" y2=\"" << base
       << "\" stroke=\"black\"/>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace preempt::svg

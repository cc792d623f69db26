#include "riccati/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace riccati::lab {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string short_num(double v) {
    if (!std::isfinite(v)) return "?";
    char buf[48];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 5);
    return std::string(buf, res.ptr);
}

std::string escape_xml(const std::string& s) {
    std::string out;
    out.reserve(s.size());
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

// Tick positions covering [lo, hi] at a 1/2/5 decade step.
std::vector<double> linear_ticks(double lo, double hi) {
    const double range = hi - lo;
    if (!(range > 0.0)) return {lo};
    const double raw = range / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    std::vector<double> ticks;
    const double first = std::ceil(lo / step - 1e-9) * step;
    for (double t = first; t <= hi + 1e-9 * range; t += step)
        ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
    return ticks;
}

// Decade ticks for a log axis over [lo, hi] given as log10 values.
std::vector<double> decade_ticks(double lo, double hi) {
    std::vector<double> ticks;
    for (double d = std::ceil(lo - 1e-9); d <= hi + 1e-9; d += 1.0) ticks.push_back(d);
    if (ticks.size() >= 2) return ticks;
    return linear_ticks(lo, hi);
}

}  // namespace

void write_svg_plot(const std::string& path, const PlotSpec& spec,
                    const std::vector<PlotSeries>& series) {
    const double W = spec.width, H = spec.height;
    const double L = 72, R = 24, T = spec.title.empty() ? 24 : 44, B = 56;

    // Data ranges over plottable points (log-y drops y <= 0).
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    const auto y_value = [&](double y) {
        if (!std::isfinite(y)) return std::numeric_limits<double>::quiet_NaN();
        if (!spec.log_y) return y;
        return y > 0.0 ? std::log10(y) : std::numeric_limits<double>::quiet_NaN();
    };
    for (const auto& s : series) {
        const std::size_t n = std::min(s.x.size(), s.y.size());
        for (std::size_t i = 0; i < n; ++i) {
            const double yv = y_value(s.y[i]);
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) continue;
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    }
    if (!(xmin <= xmax) || !(ymin <= ymax))
        throw std::runtime_error("svg '" + path + "': no plottable points");
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double ypad = 0.04 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
    const auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W
        << "\" height=\"" << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
        << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    if (!spec.title.empty())
        out << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"16\">"
            << escape_xml(spec.title) << "</text>\n";

    // Axes and ticks.
    out << "<g stroke=\"#333\" stroke-width=\"1\" fill=\"none\">\n"
        << "<path d=\"M" << L << " " << T << " L" << L << " " << H - B << " L" << W - R << " "
        << H - B << "\"/>\n</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double t : linear_ticks(xmin, xmax)) {
        const double x = px(t);
        out << "<line x1=\"" << x << "\" y1=\"" << H - B << "\" x2=\"" << x << "\" y2=\""
            << H - B + 5 << "\" stroke=\"#333\"/>\n"
            << "<text x=\"" << x << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">"
            << short_num(t) << "</text>\n";
    }
    const std::vector<double> yticks =
        spec.log_y ? decade_ticks(ymin + ypad, ymax - ypad) : linear_ticks(ymin, ymax);
    for (double t : yticks) {
        const double y = py(t);
        const std::string label = spec.log_y ? ("1e" + short_num(t)) : short_num(t);
        out << "<line x1=\"" << L - 5 << "\" y1=\"" << y << "\" x2=\"" << L << "\" y2=\"" << y
            << "\" stroke=\"#333\"/>\n"
            << "<line x1=\"" << L << "\" y1=\"" << y << "\" x2=\"" << W - R << "\" y2=\"" << y
            << "\" stroke=\"#ddd\" stroke-width=\"0.6\"/>\n"
            << "<text x=\"" << L - 8 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << label
            << "</text>\n";
    }
    out << "</g>\n";
    if (!spec.x_label.empty())
        out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 14
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
            << escape_xml(spec.x_label) << "</text>\n";
    if (!spec.y_label.empty())
        out << "<text x=\"18\" y=\"" << (T + H - B) / 2
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
               "transform=\"rotate(-90 18 "
            << (T + H - B) / 2 << ")\">" << escape_xml(spec.y_label) << "</text>\n";

    // Polylines, clipped to the panel.
    out << "<clipPath id=\"panel\"><rect x=\"" << L << "\" y=\"" << T << "\" width=\""
        << W - L - R << "\" height=\"" << H - T - B << "\"/></clipPath>\n"
        << "<g clip-path=\"url(#panel)\" fill=\"none\">\n";
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        const std::string color =
            s.color.empty() ? kPalette[si % kPaletteSize] : s.color;
        const std::size_t n = std::min(s.x.size(), s.y.size());
        bool open = false;
        std::string d;
        for (std::size_t i = 0; i < n; ++i) {
            const double yv = y_value(s.y[i]);
            if (!std::isfinite(s.x[i]) || !std::isfinite(yv)) {
                open = false;
                continue;
            }
            d += open ? " L" : " M";
            d += short_num(px(s.x[i]));
            d += ' ';
            d += short_num(py(yv));
            open = true;
        }
        if (!d.empty())
            out << "<path d=\"" << d.substr(1) << "\" stroke=\"" << color
                << "\" stroke-width=\"" << s.stroke_width << "\"/>\n";
    }
    out << "</g>\n";

    // Legend for labeled series.
    std::vector<std::size_t> labeled;
    for (std::size_t si = 0; si < series.size(); ++si)
        if (!series[si].label.empty()) labeled.push_back(si);
    if (!labeled.empty()) {
        const double lx = W - R - 170, ly = T + 10;
        out << "<g font-family=\"sans-serif\" font-size=\"12\">\n"
            << "<rect x=\"" << lx - 8 << "\" y=\"" << ly - 14 << "\" width=\"178\" height=\""
            << 18 * labeled.size() + 10 << "\" fill=\"white\" fill-opacity=\"0.85\" "
               "stroke=\"#999\" stroke-width=\"0.7\"/>\n";
        for (std::size_t k = 0; k < labeled.size(); ++k) {
            const auto& s = series[labeled[k]];
            const std::string color =
                s.color.empty() ? kPalette[labeled[k] % kPaletteSize] : s.color;
            const double y = ly + 18 * static_cast<double>(k);
            out << "<line x1=\"" << lx << "\" y1=\"" << y - 4 << "\" x2=\"" << lx + 24
                << "\" y2=\"" << y - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
                << "<text x=\"" << lx + 30 << "\" y=\"" << y << "\" fill=\"#222\">"
                << escape_xml(s.label) << "</text>\n";
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
    out.flush();
    if (!out) throw std::runtime_error("write failure on '" + path + "'");
}

}  // namespace riccati::lab

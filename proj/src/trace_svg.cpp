#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hybridsr/bench.hpp"
#include "hybridsr/errors.hpp"

namespace hybridsr {

namespace {

constexpr double kWidth = 800;
constexpr double kHeight = 480;
constexpr double kLeft = 80;
constexpr double kRight = 170;  // room for the legend
constexpr double kTop = 30;
constexpr double kBottom = 60;
constexpr double kFloor = 1e-16;

constexpr std::array<std::string_view, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                      "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string escape_xml(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

double log_residual(double r) {
    if (std::isnan(r)) return std::log10(kFloor);
    return std::log10(std::max(r, kFloor));
}

// Tick spacing from {1, 2, 5} x 10^k giving at most `max_ticks` intervals.
double nice_step(double span, int max_ticks) {
    const double raw = span / max_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (m * mag >= raw) return m * mag;
    }
    return 10.0 * mag;
}

}  // namespace

void emit_trace_svg(std::span<const LabeledTrace> traces, std::ostream& out) {
    if (traces.empty()) throw InvalidArgument("no traces to plot");
    double max_gen = 0;
    double y_lo = INFINITY;
    double y_hi = -INFINITY;
    for (const auto& t : traces) {
        if (t.points.empty()) throw InvalidArgument("trace '" + t.label + "' is empty");
        for (const auto& p : t.points) {
            max_gen = std::max(max_gen, static_cast<double>(p.generation));
            if (std::isinf(p.residual)) continue;
            const double y = log_residual(p.residual);
            y_lo = std::min(y_lo, y);
            y_hi = std::max(y_hi, y);
        }
    }
    if (max_gen <= 0) max_gen = 1;
    if (y_lo > y_hi) y_lo = y_hi = 0;  // every point was infinite
    y_lo = std::floor(y_lo);
    y_hi = std::ceil(y_hi);
    if (y_hi - y_lo < 1) y_hi = y_lo + 1;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto sx = [&](double g) { return kLeft + g / max_gen * plot_w; };
    auto sy = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
    s += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";

    // Axes and grid.
    s += "<g stroke=\"#000\" stroke-width=\"1\">\n";
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop + plot_h) + "\" x2=\"" + num(kLeft + plot_w) +
         "\" y2=\"" + num(kTop + plot_h) + "\"/>\n";
    s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
         num(kTop + plot_h) + "\"/>\n";
    s += "</g>\n";

    s += "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#000\">\n";
    const double x_step = std::max(1.0, nice_step(max_gen, 8));
    for (double g = 0; g <= max_gen + 1e-9; g += x_step) {
        const double x = sx(g);
        s += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop + plot_h) + "\" x2=\"" + num(x) + "\" y2=\"" +
             num(kTop + plot_h + 4) + "\" stroke=\"#000\"/>\n";
        s += "<text x=\"" + num(x) + "\" y=\"" + num(kTop + plot_h + 16) + "\" text-anchor=\"middle\">" +
             std::to_string(static_cast<long long>(g)) + "</text>\n";
    }
    const double y_step = std::max(1.0, nice_step(y_hi - y_lo, 10));
    for (double y = y_lo; y <= y_hi + 1e-9; y += y_step) {
        const double py = sy(y);
        s += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py) + "\" x2=\"" + num(kLeft + plot_w) + "\" y2=\"" +
             num(py) + "\" stroke=\"#ddd\"/>\n";
        s += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py + 4) + "\" text-anchor=\"end\">" +
             std::to_string(static_cast<long long>(y)) + "</text>\n";
    }
    s += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 15) +
         "\" text-anchor=\"middle\" font-size=\"13\">generation</text>\n";
    s += "<text x=\"20\" y=\"" + num(kTop + plot_h / 2) + "\" text-anchor=\"middle\" font-size=\"13\" " +
         "transform=\"rotate(-90 20 " + num(kTop + plot_h / 2) + ")\">log10 residual</text>\n";
    s += "</g>\n";

    for (std::size_t k = 0; k < traces.size(); ++k) {
        s += "<polyline fill=\"none\" stroke-width=\"1.5\" stroke=\"" + std::string(kPalette[k % kPalette.size()]) +
             "\" points=\"";
        bool first = true;
        for (const auto& p : traces[k].points) {
            const double y = std::isinf(p.residual) ? y_hi : log_residual(p.residual);
            if (!first) s += ' ';
            first = false;
            s += num(sx(static_cast<double>(p.generation))) + "," + num(sy(y));
        }
        s += "\"/>\n";
    }

    const bool labeled = std::any_of(traces.begin(), traces.end(), [](const auto& t) { return !t.label.empty(); });
    if (labeled) {
        s += "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
        for (std::size_t k = 0; k < traces.size(); ++k) {
            const double y = kTop + 10 + 20 * static_cast<double>(k);
            const double x = kLeft + plot_w + 15;
            s += "<g class=\"legend-entry\"><line x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x + 24) +
                 "\" y2=\"" + num(y) + "\" stroke-width=\"2\" stroke=\"" +
                 std::string(kPalette[k % kPalette.size()]) + "\"/><text x=\"" + num(x + 30) + "\" y=\"" +
                 num(y + 4) + "\">" + escape_xml(traces[k].label) + "</text></g>\n";
        }
        s += "</g>\n";
    }
    s += "</svg>\n";

    out.write(s.data(), static_cast<std::streamsize>(s.size()));
    out.flush();
    if (!out) throw std::runtime_error("failed to write SVG output");
}

}  // namespace hybridsr

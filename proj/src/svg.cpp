#include "fxcast/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "fxcast/errors.hpp"

namespace fxcast::svg {

namespace {

struct Frame {
    double x0, x1, y0, y1;  // data bounds
    int width, height, margin;

    double px(double x) const {
        double span = x1 - x0;
        if (span == 0.0) span = 1.0;
        return margin + (x - x0) / span * (width - 2 * margin);
    }
    double py(double y) const {
        double span = y1 - y0;
        if (span == 0.0) span = 1.0;
        return height - margin - (y - y0) / span * (height - 2 * margin);
    }
};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void open_svg(std::ostringstream& out, const ChartOptions& o) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << o.width << "\" height=\""
        << o.height << "\" viewBox=\"0 0 " << o.width << ' ' << o.height << "\">\n";
    out << "<rect width=\"" << o.width << "\" height=\"" << o.height
        << "\" fill=\"white\"/>\n";
    if (!o.title.empty()) {
        out << "<text x=\"" << o.width / 2 << "\" y=\"24\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\" font-size=\"16\">"
            << o.title << "</text>\n";
    }
}

void axes(std::ostringstream& out, const Frame& f) {
    out << "<line x1=\"" << f.margin << "\" y1=\"" << f.height - f.margin << "\" x2=\""
        << f.width - f.margin << "\" y2=\"" << f.height - f.margin
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << f.margin << "\" y1=\"" << f.margin << "\" x2=\"" << f.margin
        << "\" y2=\"" << f.height - f.margin << "\" stroke=\"black\"/>\n";
    // min/max labels on the y axis
    out << "<text x=\"4\" y=\"" << f.height - f.margin
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(f.y0) << "</text>\n";
    out << "<text x=\"4\" y=\"" << f.margin + 10
        << "\" font-family=\"sans-serif\" font-size=\"10\">" << fmt(f.y1) << "</text>\n";
}

void polyline(std::ostringstream& out, const Frame& f, const std::vector<double>& values,
              const char* color) {
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ' ';
        out << fmt(f.px(static_cast<double>(i))) << ',' << fmt(f.py(values[i]));
    }
    out << "\"/>\n";
}

}  // namespace

std::string line_chart(const std::vector<double>& values, const ChartOptions& options) {
    if (values.empty()) throw ArgumentError("line_chart: empty values");
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    Frame f{0.0, static_cast<double>(values.size() - 1), *lo, *hi,
            options.width, options.height, options.margin};
    std::ostringstream out;
    open_svg(out, options);
    axes(out, f);
    polyline(out, f, values, "steelblue");
    out << "</svg>\n";
    return out.str();
}

std::string overlay_chart(const std::vector<double>& actual,
                          const std::vector<double>& predicted, const ChartOptions& options) {
    if (actual.empty() || actual.size() != predicted.size()) {
        throw ArgumentError("overlay_chart: empty or mismatched series");
    }
    double lo = actual[0], hi = actual[0];
    for (double v : actual) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    for (double v : predicted) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    Frame f{0.0, static_cast<double>(actual.size() - 1), lo, hi,
            options.width, options.height, options.margin};
    std::ostringstream out;
    open_svg(out, options);
    axes(out, f);
    polyline(out, f, actual, "steelblue");
    polyline(out, f, predicted, "firebrick");
    out << "</svg>\n";
    return out.str();
}

std::string histogram(const std::vector<double>& values, std::size_t bins,
                      const ChartOptions& options) {
    if (values.empty()) throw ArgumentError("histogram: empty values");
    if (bins == 0) {
        bins = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(values.size()))));
    }
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (lo == hi) hi = lo + 1.0;
    std::vector<std::size_t> counts(bins, 0);
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / (hi - lo) * static_cast<double>(bins));
        if (b >= bins) b = bins - 1;
        ++counts[b];
    }
    std::size_t max_count = *std::max_element(counts.begin(), counts.end());

    Frame f{lo, hi, 0.0, static_cast<double>(max_count),
            options.width, options.height, options.margin};
    std::ostringstream out;
    open_svg(out, options);
    axes(out, f);
    double bin_width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t b = 0; b < bins; ++b) {
        double x = f.px(lo + static_cast<double>(b) * bin_width);
        double x2 = f.px(lo + static_cast<double>(b + 1) * bin_width);
        double y = f.py(static_cast<double>(counts[b]));
        double y0 = f.py(0.0);
        out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
            << fmt(std::max(1.0, x2 - x - 1.0)) << "\" height=\"" << fmt(y0 - y)
            << "\" fill=\"steelblue\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace fxcast::svg

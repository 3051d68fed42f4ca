#include "lmr/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lmr {

namespace {

constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 40, kB = 50;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

struct Frame {
    double x0, x1, y0, y1;
    double px(double x) const { return kL + (x - x0) / (x1 - x0) * (kW - kL - kR); }
    double py(double y) const { return kH - kB - (y - y0) / (y1 - y0) * (kH - kT - kB); }
};

void open_svg(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
       << "</text>\n";
}

void axes(std::ostringstream& os, const Frame& f, const std::string& xl, const std::string& yl,
          const std::vector<double>& xt, const std::vector<std::string>& xs, const std::vector<double>& yt,
          const std::vector<std::string>& ys) {
    os << "<rect x=\"" << kL << "\" y=\"" << kT << "\" width=\"" << kW - kL - kR << "\" height=\"" << kH - kT - kB
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (std::size_t i = 0; i < xt.size(); ++i)
        os << "<text x=\"" << num(f.px(xt[i])) << "\" y=\"" << kH - kB + 16 << "\" text-anchor=\"middle\">" << xs[i]
           << "</text>\n";
    for (std::size_t i = 0; i < yt.size(); ++i)
        os << "<text x=\"" << kL - 6 << "\" y=\"" << num(f.py(yt[i]) + 4) << "\" text-anchor=\"end\">" << ys[i]
           << "</text>\n";
    os << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">" << escape(xl) << "</text>\n";
    os << "<text x=\"16\" y=\"" << kH / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << kH / 2
       << ")\">" << escape(yl) << "</text>\n";
}

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

std::string csv_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header) { row(header); }

CsvWriter& CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) text += ',';
        text += cells[i];
    }
    text += '\n';
    return *this;
}

std::string svg_histogram(const std::vector<double>& x, const std::string& title, std::size_t bins,
                          const std::vector<std::pair<double, double>>& curve) {
    std::ostringstream os;
    open_svg(os, title);
    if (x.empty() || bins == 0) {
        os << "</svg>\n";
        return os.str();
    }
    auto [mn, mx] = std::minmax_element(x.begin(), x.end());
    double lo = *mn, hi = *mx;
    if (hi <= lo) hi = lo + 1.0;
    const double w = (hi - lo) / double(bins);
    std::vector<double> dens(bins, 0.0);
    for (double v : x) dens[std::min(bins - 1, static_cast<std::size_t>((v - lo) / w))] += 1.0;
    for (auto& c : dens) c /= double(x.size()) * w;
    double top = *std::max_element(dens.begin(), dens.end());
    for (auto& [cx, cy] : curve) top = std::max(top, cy);
    const Frame f{lo, hi, 0.0, top * 1.05};
    for (std::size_t b = 0; b < bins; ++b) {
        const double x0 = f.px(lo + b * w), x1 = f.px(lo + (b + 1) * w);
        os << "<rect x=\"" << num(x0) << "\" y=\"" << num(f.py(dens[b])) << "\" width=\"" << num(x1 - x0)
           << "\" height=\"" << num(f.py(0) - f.py(dens[b])) << "\" fill=\"#9ecae1\" stroke=\"#3182bd\"/>\n";
    }
    if (!curve.empty()) {
        os << "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
        for (auto& [cx, cy] : curve)
            if (cx >= lo && cx <= hi) os << num(f.px(cx)) << ',' << num(f.py(cy)) << ' ';
        os << "\"/>\n";
    }
    axes(os, f, "value", "density", {lo, (lo + hi) / 2, hi}, {tick(lo), tick((lo + hi) / 2), tick(hi)}, {0, top},
         {"0", tick(top)});
    os << "</svg>\n";
    return os.str();
}

std::string svg_loglog(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel) {
    std::ostringstream os;
    open_svg(os, title);
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!(s.x[i] > 0 && s.y[i] > 0)) continue;
            x0 = std::min(x0, std::log10(s.x[i]));
            x1 = std::max(x1, std::log10(s.x[i]));
            y0 = std::min(y0, std::log10(s.y[i]));
            y1 = std::max(y1, std::log10(s.y[i]));
        }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    const double pad = 0.05 * (y1 - y0);
    const Frame f{x0, x1, y0 - pad, y1 + pad};
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* col = kColors[k % 6];
        os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (s.x[i] > 0 && s.y[i] > 0) os << num(f.px(std::log10(s.x[i]))) << ',' << num(f.py(std::log10(s.y[i]))) << ' ';
        os << "\"/>\n";
        os << "<text x=\"" << kL + 10 << "\" y=\"" << kT + 16 + 16 * k << "\" fill=\"" << col << "\">"
           << escape(s.label) << "</text>\n";
    }
    axes(os, f, xlabel + " (log10)", ylabel + " (log10)", {x0, x1}, {tick(x0), tick(x1)}, {f.y0, f.y1},
         {tick(f.y0), tick(f.y1)});
    os << "</svg>\n";
    return os.str();
}

std::string svg_regime_map(const std::vector<RegimePoint>& points) {
    std::ostringstream os;
    open_svg(os, "Limit of the self-normalized sum");
    const Frame f{0.0, 1.0, 0.0, 0.5};
    // NVM region: 1 - 2d < alpha < 1, the triangle above the line d = (1 - alpha) / 2.
    os << "<polygon points=\"" << num(f.px(0)) << ',' << num(f.py(0.5)) << ' ' << num(f.px(1)) << ','
       << num(f.py(0.5)) << ' ' << num(f.px(1)) << ',' << num(f.py(0)) << "\" fill=\"#fdd0a2\"/>\n";
    os << "<line x1=\"" << num(f.px(0)) << "\" y1=\"" << num(f.py(0.5)) << "\" x2=\"" << num(f.px(1)) << "\" y2=\""
       << num(f.py(0)) << "\" stroke=\"black\" stroke-dasharray=\"4 3\"/>\n";
    os << "<line x1=\"" << num(f.px(1)) << "\" y1=\"" << num(f.py(0)) << "\" x2=\"" << num(f.px(1)) << "\" y2=\""
       << num(f.py(0.5)) << "\" stroke=\"#3182bd\" stroke-width=\"3\"/>\n";
    os << "<text x=\"" << num(f.px(0.62)) << "\" y=\"" << num(f.py(0.42)) << "\">NVM: sqrt(Z) N</text>\n";
    os << "<text x=\"" << num(f.px(0.08)) << "\" y=\"" << num(f.py(0.08)) << "\">Normal (alpha &lt;= 1-2d)</text>\n";
    os << "<text x=\"" << num(f.px(0.99)) << "\" y=\"" << num(f.py(0.02)) << "\" text-anchor=\"end\">alpha = 1 and "
       << "finite mean: Normal</text>\n";
    for (const auto& p : points) {
        os << "<circle cx=\"" << num(f.px(p.alpha)) << "\" cy=\"" << num(f.py(p.d)) << "\" r=\"5\" fill=\""
           << (p.nvm ? "#d62728" : "#1f77b4") << "\" stroke=\"black\"/>\n";
    }
    axes(os, f, "alpha", "d", {0, 0.5, 1}, {"0", "0.5", "1"}, {0, 0.25, 0.5}, {"0", "0.25", "0.5"});
    os << "</svg>\n";
    return os.str();
}

}  // namespace lmr

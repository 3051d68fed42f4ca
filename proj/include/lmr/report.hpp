#pragma once

// CSV and SVG text output. Numbers use a fixed round-trip format so files are
// byte-identical across runs.

#include <string>
#include <utility>
#include <vector>

namespace lmr {

/// "%.17g", with "nan" / "inf" / "-inf" spelled out.
std::string csv_number(double v);

struct CsvWriter {
    explicit CsvWriter(const std::vector<std::string>& header);
    CsvWriter& row(const std::vector<std::string>& cells);
    std::string str() const { return text; }
    std::string text;
};

/// Histogram with an optional reference density curve.
std::string svg_histogram(const std::vector<double>& x, const std::string& title, std::size_t bins = 50,
                          const std::vector<std::pair<double, double>>& curve = {});

struct Series {
    std::string label;
    std::vector<double> x, y;
};

/// Log-log line plot of several series.
std::string svg_loglog(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                       const std::string& ylabel);

struct RegimePoint {
    double alpha, d;
    bool nvm;
};

/// The (alpha, d) plane with the NVM triangle 1 - 2d < alpha < 1 shaded and
/// labelled grid points.
std::string svg_regime_map(const std::vector<RegimePoint>& points);

}  // namespace lmr

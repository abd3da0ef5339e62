#include "ocboost/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string_view>
#include <vector>

#include "ocboost/errors.hpp"
#include "ocboost/text.hpp"

namespace ocboost {

namespace {

constexpr std::string_view kSyntheticHeader = "example_index,learner,K,convention,seed,approx_error";
constexpr std::string_view kMnistHeader = "examples_seen,learner,digit,test_error,approx_error,ova_error";

constexpr std::array<std::string_view, 8> kPalette{"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                   "#9467bd", "#8c564b", "#e377c2", "#17becf"};

struct Series {
    std::string name;
    // x -> (sum, count); mean is drawn
    std::map<double, std::pair<double, std::size_t>> points;
};

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string escape(std::string_view s) {
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

std::vector<Series> read_series(std::istream& in, std::string& y_label, std::string& x_label) {
    std::string line;
    if (!std::getline(in, line)) throw FormatError("plot: empty CSV");
    const auto header = trim(line);
    const bool synthetic = header == kSyntheticHeader;
    const bool mnist = header == kMnistHeader;
    if (!synthetic && !mnist)
        throw FormatError("plot: unknown CSV schema '" + std::string(header) + "'; expected columns '" +
                          std::string(kSyntheticHeader) + "' or '" + std::string(kMnistHeader) + "'");
    x_label = synthetic ? "examples seen" : "training examples seen";
    y_label = synthetic ? "approximation error (mean over seeds)" : "one-vs-all test error";

    std::vector<Series> series;
    std::map<std::string, std::size_t> index;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++row;
        auto f = split(trim(line), ',');
        if (f.size() != 6) throw FormatError("plot: row " + std::to_string(row) + " does not have 6 fields");
        std::string name;
        double x = parse_double(f[0], "x value");
        double y = 0.0;
        if (synthetic) {
            name = f[1] == "ocb" ? "ocb K=" + std::string(f[2]) + " " + std::string(f[3])
                                 : std::string(f[1]) + " " + std::string(f[3]);
            y = parse_double(f[5], "approx_error");
        } else {
            // ova_error is repeated for each digit; the mean over digits leaves it unchanged
            name = std::string(f[1]);
            y = parse_double(f[5], "ova_error");
        }
        auto [it, fresh] = index.try_emplace(name, series.size());
        if (fresh) series.push_back({name, {}});
        auto& p = series[it->second].points[x];
        p.first += y;
        ++p.second;
    }
    if (series.empty()) throw FormatError("plot: CSV has a header but no data rows");
    return series;
}

}  // namespace

void emit_plot(std::istream& csv, std::ostream& svg, const PlotOptions& options) {
    std::string x_label, y_label;
    const auto series = read_series(csv, y_label, x_label);

    double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = 0.0, ymax = -HUGE_VAL;
    for (const auto& s : series)
        for (const auto& [x, acc] : s.points) {
            const double y = acc.first / static_cast<double>(acc.second);
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;

    const double w = options.width, h = options.height;
    const double left = 70, right = 220, top = 40, bottom = 50;
    const double pw = w - left - right, ph = h - top - bottom;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + ph - (y - ymin) / (ymax - ymin) * ph; };

    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
        << "\" viewBox=\"0 0 " << options.width << ' ' << options.height << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!options.title.empty())
        svg << "<text x=\"" << fmt(left + pw / 2, "%.1f") << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
            << escape(options.title) << "</text>\n";

    svg << "<g stroke=\"black\" stroke-width=\"1\">\n";
    svg << "<line x1=\"" << fmt(left, "%.1f") << "\" y1=\"" << fmt(top + ph, "%.1f") << "\" x2=\""
        << fmt(left + pw, "%.1f") << "\" y2=\"" << fmt(top + ph, "%.1f") << "\"/>\n";
    svg << "<line x1=\"" << fmt(left, "%.1f") << "\" y1=\"" << fmt(top, "%.1f") << "\" x2=\"" << fmt(left, "%.1f")
        << "\" y2=\"" << fmt(top + ph, "%.1f") << "\"/>\n";
    svg << "</g>\n<g font-size=\"11\">\n";
    for (int t = 0; t <= 5; ++t) {
        const double xv = xmin + (xmax - xmin) * t / 5.0, yv = ymin + (ymax - ymin) * t / 5.0;
        svg << "<text x=\"" << fmt(px(xv), "%.1f") << "\" y=\"" << fmt(top + ph + 16, "%.1f")
            << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        svg << "<text x=\"" << fmt(left - 6, "%.1f") << "\" y=\"" << fmt(py(yv) + 4, "%.1f")
            << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    svg << "<text x=\"" << fmt(left + pw / 2, "%.1f") << "\" y=\"" << fmt(h - 10, "%.1f")
        << "\" text-anchor=\"middle\">" << escape(x_label) << "</text>\n";
    svg << "<text transform=\"translate(16," << fmt(top + ph / 2, "%.1f") << ") rotate(-90)\" text-anchor=\"middle\">"
        << escape(y_label) << "</text>\n</g>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto colour = kPalette[i % kPalette.size()];
        svg << "<polyline class=\"series\" fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& [x, acc] : series[i].points) {
            svg << (first ? "" : " ") << fmt(px(x), "%.2f") << ',' << fmt(py(acc.first / acc.second), "%.2f");
            first = false;
        }
        svg << "\"/>\n";
        const double ly = top + 10 + 18.0 * static_cast<double>(i);
        svg << "<g class=\"legend\"><line x1=\"" << fmt(left + pw + 15, "%.1f") << "\" y1=\"" << fmt(ly, "%.1f")
            << "\" x2=\"" << fmt(left + pw + 35, "%.1f") << "\" y2=\"" << fmt(ly, "%.1f") << "\" stroke=\"" << colour
            << "\" stroke-width=\"2\"/><text x=\"" << fmt(left + pw + 40, "%.1f") << "\" y=\"" << fmt(ly + 4, "%.1f")
            << "\" font-size=\"11\">" << escape(series[i].name) << "</text></g>\n";
    }
    svg << "</svg>\n";
}

void emit_plot(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path,
               const PlotOptions& options) {
    std::ifstream in(csv_path);
    if (!in) throw FormatError("plot: cannot open " + csv_path.string());
    std::ofstream out(svg_path);
    if (!out) throw FormatError("plot: cannot write " + svg_path.string());
    emit_plot(in, out, options);
}

}  // namespace ocboost

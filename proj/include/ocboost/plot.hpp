#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

namespace ocboost {

struct PlotOptions {
    std::string title;
    int width = 800;
    int height = 500;
};

/// Renders an experiment CSV as an SVG line chart, one polyline per learner.
///  synthetic schema: approx_error averaged over seeds against example_index
///  mnist schema:     one-vs-all test error against examples_seen
/// Any other header raises FormatError listing the accepted columns.
void emit_plot(std::istream& csv, std::ostream& svg, const PlotOptions& options = {});
void emit_plot(const std::filesystem::path& csv_path, const std::filesystem::path& svg_path,
               const PlotOptions& options = {});

}  // namespace ocboost

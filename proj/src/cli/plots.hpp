#ifndef MBUR_SRC_CLI_PLOTS_HPP_
#define MBUR_SRC_CLI_PLOTS_HPP_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace mbur::cli {

using Points = std::vector<std::pair<double, double>>;

void write_points_csv(const std::filesystem::path& path, const std::string& header,
                      const Points& points);

/// Minimal standalone SVG: optional scatter, optional polyline, axis box
/// with min/max tick labels.
void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::string& x_label, const std::string& y_label, const Points& scatter,
               const Points& line);

}  // namespace mbur::cli

#endif  // MBUR_SRC_CLI_PLOTS_HPP_

#include "plots.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <limits>

#include "mbur/error.hpp"

namespace mbur::cli {

namespace {

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("{}: cannot open for writing", path.string()));
  return out;
}

std::string escape(const std::string& s) {
  std::string r;
  for (char ch : s) {
    switch (ch) {
      case '<': r += "&lt;"; break;
      case '>': r += "&gt;"; break;
      case '&': r += "&amp;"; break;
      default: r += ch;
    }
  }
  return r;
}

}  // namespace

void write_points_csv(const std::filesystem::path& path, const std::string& header,
                      const Points& points) {
  auto out = open_or_throw(path);
  out << header << '\n';
  for (const auto& [x, y] : points) out << fmt::format("{:.10g},{:.10g}\n", x, y);
}

void write_svg(const std::filesystem::path& path, const std::string& title,
               const std::string& x_label, const std::string& y_label, const Points& scatter,
               const Points& line) {
  constexpr double kW = 640.0, kH = 480.0, kMargin = 60.0;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto* set : {&scatter, &line}) {
    for (const auto& [x, y] : *set) {
      x0 = std::min(x0, x);
      x1 = std::max(x1, x);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  const auto px = [&](double x) { return kMargin + (x - x0) / (x1 - x0) * (kW - 2 * kMargin); };
  const auto py = [&](double y) { return kH - kMargin - (y - y0) / (y1 - y0) * (kH - 2 * kMargin); };

  auto out = open_or_throw(path);
  out << fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
      "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      kW, kH);
  out << fmt::format("<rect x=\"{0}\" y=\"{0}\" width=\"{1}\" height=\"{2}\" fill=\"none\" "
                     "stroke=\"black\"/>\n",
                     kMargin, kW - 2 * kMargin, kH - 2 * kMargin);
  out << fmt::format("<text x=\"{}\" y=\"30\" text-anchor=\"middle\" font-size=\"14\">{}</text>\n",
                     kW / 2, escape(title));
  out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", kW / 2,
                     kH - 15, escape(x_label));
  out << fmt::format("<text x=\"15\" y=\"{0}\" transform=\"rotate(-90 15 {0})\" "
                     "text-anchor=\"middle\">{1}</text>\n",
                     kH / 2, escape(y_label));
  out << fmt::format("<text x=\"{}\" y=\"{}\">{:.4g}</text>\n", kMargin, kH - kMargin + 15, x0);
  out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4g}</text>\n", kW - kMargin,
                     kH - kMargin + 15, x1);
  out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4g}</text>\n", kMargin - 5,
                     kH - kMargin, y0);
  out << fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{:.4g}</text>\n", kMargin - 5,
                     kMargin + 10, y1);
  for (const auto& [x, y] : scatter) {
    out << fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"steelblue\"/>\n", px(x),
                       py(y));
  }
  if (!line.empty()) {
    out << "<polyline fill=\"none\" stroke=\"firebrick\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : line) out << fmt::format("{:.2f},{:.2f} ", px(x), py(y));
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

}  // namespace mbur::cli

#include "mbur/dataio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "mbur/error.hpp"

namespace mbur {

namespace {

struct OecdRow {
  const char* country;
  double dwellings_pct;
  double unemployment_rate;
};

// Dwellings without basic facilities (%) and long-term unemployment rate (%).
constexpr std::array<OecdRow, 27> kOecd = {{
    {"Austria", 0.8, 1.3},
    {"Belgium", 0.7, 2.3},
    {"Canada", 0.2, 0.5},
    {"Colombia", 12.3, 1.1},
    {"Costa Rica", 2.3, 1.5},
    {"Czechia", 0.5, 0.6},
    {"Denmark", 0.5, 0.9},
    {"Estonia", 5.7, 1.2},
    {"Finland", 0.4, 1.2},
    {"France", 0.5, 2.9},
    {"Germany", 0.1, 1.2},
    {"Hungary", 3.5, 1.2},
    {"Ireland", 0.2, 1.2},
    {"Italy", 0.6, 4.8},
    {"Japan", 6.4, 0.8},
    {"Latvia", 11.2, 2.2},
    {"Lithuania", 11.8, 2.5},
    {"Luxembourg", 0.1, 1.7},  // truncated to "Luxembou" in the source table
    {"Netherlands", 0.1, 0.9},  // truncated to "Netherlan"
    {"Poland", 2.3, 0.6},
    {"Portugal", 0.9, 2.3},
    {"Slovak Republic", 1.5, 3.0},
    {"Slovenia", 0.2, 1.9},
    {"Spain", 0.3, 5.0},
    {"T\xc3\xbcrkiye", 4.9, 3.3},
    {"UK", 0.5, 0.9},
    {"USA", 0.1, 0.5},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.emplace_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::optional<double> parse_number(std::string_view cell) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::size_t column_index(const std::vector<std::string>& header, const std::string& name,
                         const std::filesystem::path& path) {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end()) {
    throw DataError(fmt::format("{}: column '{}' not found in header", path.string(), name));
  }
  return static_cast<std::size_t>(it - header.begin());
}

}  // namespace

Dataset load_builtin_oecd(bool log_predictor) {
  Dataset d;
  d.response_name = "dwellings_without_basic_facilities";
  d.covariate_names = {log_predictor ? "log_long_term_unemployment_rate"
                                     : "long_term_unemployment_rate"};
  d.covariates.resize(kOecd.size(), 1);
  for (std::size_t i = 0; i < kOecd.size(); ++i) {
    d.labels.emplace_back(kOecd[i].country);
    d.response.push_back(kOecd[i].dwellings_pct / 100.0);
    const double rate = kOecd[i].unemployment_rate;
    d.covariates(static_cast<Eigen::Index>(i), 0) = log_predictor ? std::log(rate) : rate;
  }
  return d;
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("{}: cannot open file", path.string()));
  if (!options.log_covariates.empty() &&
      options.log_covariates.size() != options.covariate_cols.size()) {
    throw DataError("log flags must match the number of covariate columns");
  }

  std::string line;
  if (!std::getline(in, line)) throw DataError(fmt::format("{}: file is empty", path.string()));
  if (line.starts_with("\xef\xbb\xbf")) line.erase(0, 3);
  const auto header = split_line(line);

  const auto resp_idx = column_index(header, options.response_col, path);
  std::vector<std::size_t> cov_idx;
  for (const auto& name : options.covariate_cols) cov_idx.push_back(column_index(header, name, path));
  std::optional<std::size_t> label_idx;
  if (options.label_col) label_idx = column_index(header, *options.label_col, path);

  Dataset d;
  d.response_name = options.response_col;
  d.covariate_names = options.covariate_cols;
  std::vector<std::vector<double>> cov_rows;

  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError(fmt::format("{}: row {} has {} fields, header has {}", path.string(), row,
                                  cells.size(), header.size()),
                      row);
    }
    const auto number = [&](std::size_t idx) {
      const auto v = parse_number(cells[idx]);
      if (!v) {
        throw DataError(fmt::format("{}: row {}: column '{}' is not numeric ('{}')",
                                    path.string(), row, header[idx], cells[idx]),
                        row);
      }
      return *v;
    };

    double y = number(resp_idx);
    if (options.scale_response) y /= *options.scale_response;
    if (!(y > 0.0 && y < 1.0)) {
      throw DataError(fmt::format("{}: row {}: response {} is not strictly inside (0,1)",
                                  path.string(), row, y),
                      row);
    }
    std::vector<double> covs;
    for (std::size_t j = 0; j < cov_idx.size(); ++j) {
      double v = number(cov_idx[j]);
      if (!options.log_covariates.empty() && options.log_covariates[j]) {
        if (!(v > 0.0)) {
          throw DataError(fmt::format("{}: row {}: cannot take log of '{}' = {}", path.string(),
                                      row, header[cov_idx[j]], v),
                          row);
        }
        v = std::log(v);
      }
      covs.push_back(v);
    }
    d.response.push_back(y);
    cov_rows.push_back(std::move(covs));
    if (label_idx) d.labels.push_back(cells[*label_idx]);
  }
  if (d.response.empty()) throw DataError(fmt::format("{}: no data rows", path.string()));

  d.covariates.resize(static_cast<Eigen::Index>(cov_rows.size()),
                      static_cast<Eigen::Index>(cov_idx.size()));
  for (std::size_t i = 0; i < cov_rows.size(); ++i) {
    for (std::size_t j = 0; j < cov_idx.size(); ++j) {
      d.covariates(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cov_rows[i][j];
    }
  }
  return d;
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw DataError(fmt::format("{}: cannot open for writing", path.string()));
  write_csv(out, data);
  if (!out) throw DataError(fmt::format("{}: write failed", path.string()));
}


void write_csv(std::ostream& out, const Dataset& data) {
  const bool labelled = !data.labels.empty();
  if (labelled) out << "label,";
  out << data.response_name;
  for (const auto& name : data.covariate_names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < data.n(); ++i) {
    if (labelled) out << data.labels[i] << ',';
    out << fmt::format("{:.17g}", data.response[i]);
    for (Eigen::Index j = 0; j < data.covariates.cols(); ++j) {
      out << fmt::format(",{:.17g}", data.covariates(static_cast<Eigen::Index>(i), j));
    }
    out << '\n';
  }
}

double sample_quantile(std::span<const double> values, double p, QuartileRule rule) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();
  const auto interpolate = [&](double h) {
    // h is a 0-based fractional position
    if (h <= 0.0) return x.front();
    if (h >= static_cast<double>(n - 1)) return x.back();
    const auto lo = static_cast<std::size_t>(std::floor(h));
    return x[lo] + (h - static_cast<double>(lo)) * (x[lo + 1] - x[lo]);
  };
  switch (rule) {
    case QuartileRule::Linear:
      return interpolate(p * static_cast<double>(n - 1));
    case QuartileRule::NearestRank: {
      auto k = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
      k = std::clamp<std::size_t>(k, 1, n);
      return x[k - 1];
    }
    case QuartileRule::Hazen:
      return interpolate(p * static_cast<double>(n) - 0.5);
  }
  return x.front();
}

Description describe(std::span<const double> y, QuartileRule rule) {
  if (y.size() < 2) throw DataError("describe needs at least two values");
  const double n = static_cast<double>(y.size());
  Description d;
  double sum = 0.0;
  for (double v : y) sum += v;
  d.mean = sum / n;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  for (double v : y) {
    const double e = v - d.mean;
    m2 += e * e;
    m3 += e * e * e;
    m4 += e * e * e * e;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  d.sd = std::sqrt(m2 * n / (n - 1.0));
  if (m2 > 0.0) {
    if (n >= 3) {
      const double g1 = m3 / std::pow(m2, 1.5);
      d.skewness = std::sqrt(n * (n - 1.0)) / (n - 2.0) * g1;
    }
    if (n >= 4) {
      const double g2 = m4 / (m2 * m2) - 3.0;
      d.kurtosis = (n - 1.0) / ((n - 2.0) * (n - 3.0)) * ((n + 1.0) * g2 + 6.0) + 3.0;
    }
  }
  const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
  d.min = *lo;
  d.max = *hi;
  d.q1 = sample_quantile(y, 0.25, rule);
  d.q2 = sample_quantile(y, 0.5, rule);
  d.q3 = sample_quantile(y, 0.75, rule);
  return d;
}

}  // namespace mbur

#ifndef MBUR_DATAIO_HPP_
#define MBUR_DATAIO_HPP_

#include <Eigen/Dense>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mbur {

struct Dataset {
  std::string response_name;
  std::vector<std::string> covariate_names;
  /// Row labels (country names for the builtin data); may be empty.
  std::vector<std::string> labels;
  std::vector<double> response;
  /// n x k, intercept excluded.
  Eigen::MatrixXd covariates;

  std::size_t n() const noexcept { return response.size(); }
};

/// The 27-country OECD table: dwellings without basic facilities (percent,
/// divided by 100) against long-term unemployment rate, in table order.
Dataset load_builtin_oecd(bool log_predictor);

struct CsvOptions {
  std::string response_col;
  std::vector<std::string> covariate_cols;
  std::optional<double> scale_response;
  /// One flag per covariate, or empty for none.
  std::vector<bool> log_covariates;
  /// Optional text column used for row labels.
  std::optional<std::string> label_col;
};

/// Comma-separated with a header row. Every error is a DataError; those that
/// concern a particular data row carry its 1-based index.
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options);

/// Writes label (if any), response and covariates with a header, at full
/// round-trip precision.
void write_csv(const std::filesystem::path& path, const Dataset& data);
void write_csv(std::ostream& out, const Dataset& data);

enum class QuartileRule {
  /// Linear interpolation between order statistics, p (n - 1) + 1 (type 7).
  Linear,
  /// Smallest order statistic with rank >= p n.
  NearestRank,
  /// Piecewise linear with plotting positions (i - 0.5) / n (type 5).
  Hazen,
};

double sample_quantile(std::span<const double> values, double p, QuartileRule rule);

struct Description {
  double mean = 0.0;
  double sd = 0.0;
  /// Adjusted Fisher-Pearson coefficient G1. Empty for constant data or n < 3.
  std::optional<double> skewness;
  /// Non-excess kurtosis G2 + 3 from the adjusted estimator. Empty for
  /// constant data or n < 4.
  std::optional<double> kurtosis;
  double min = 0.0;
  double q1 = 0.0;
  double q2 = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

Description describe(std::span<const double> y, QuartileRule rule = QuartileRule::Hazen);

}  // namespace mbur

#endif  // MBUR_DATAIO_HPP_

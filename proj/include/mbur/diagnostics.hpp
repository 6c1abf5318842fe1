#ifndef MBUR_DIAGNOSTICS_HPP_
#define MBUR_DIAGNOSTICS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace mbur {

double normal_cdf(double z);

/// Inverse standard normal CDF (Wichura's AS241 PPND16, ~1e-16 relative).
/// Throws DomainError unless 0 < p < 1.
double normal_quantile(double p);

/// Randomized-quantile residuals Phi^-1(F_i).
std::vector<double> rq_residuals(std::span<const double> f_values);

/// Cox-Snell residuals -log(1 - F_i).
std::vector<double> cs_residuals(std::span<const double> f_values);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Survival function of the Kolmogorov limit law, P(K > lambda).
double kolmogorov_sf(double lambda);

/// Two-sided one-sample KS statistic against `cdf`.
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

/// KS test with the Stephens-corrected asymptotic p-value,
/// P(K > (sqrt(n) + 0.12 + 0.11 / sqrt(n)) D). Throws DataError when empty.
KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);

struct InfoCriteria {
  double aic = 0.0;
  /// Empty when n <= p + 1.
  std::optional<double> caic;
  double bic = 0.0;
  double hqic = 0.0;
};

InfoCriteria info_criteria(double loglik, std::size_t n_params, std::size_t n);

/// Pseudo-R^2: 1 - exp((2 / n) (l_null - l_full)).
double r_squared_m(double loglik_null, double loglik_full, std::size_t n);

/// Szekely's sample distance correlation. Returns 0 if either input has
/// zero distance variance. Throws DataError on length mismatch or n < 2.
double distance_correlation(std::span<const double> x, std::span<const double> y);

enum class Reference { Normal, Exponential };

/// (reference quantile at (i - 0.5) / n, i-th smallest residual).
std::vector<std::pair<double, double>> qq_points(std::span<const double> residuals,
                                                 Reference reference);

struct DiagnosticsReport {
  std::vector<double> rq;
  std::vector<double> cs;
  KsResult ks_rq;
  KsResult ks_cs;
  InfoCriteria criteria;
  std::optional<double> r2m;
  std::vector<std::pair<double, double>> qq_rq;
  std::vector<std::pair<double, double>> qq_cs;
};

/// Residuals, KS tests vs N(0,1) and Exp(1), criteria with n_params
/// parameters, and R^2_M when a null log-likelihood is supplied.
DiagnosticsReport diagnose(std::span<const double> f_values, double loglik, std::size_t n_params,
                           std::optional<double> loglik_null = std::nullopt);

}  // namespace mbur

#endif  // MBUR_DIAGNOSTICS_HPP_

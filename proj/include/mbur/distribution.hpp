#ifndef MBUR_DISTRIBUTION_HPP_
#define MBUR_DISTRIBUTION_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mbur {

/// Shape parameter of the Median Based Unit Rayleigh distribution.
///
/// The density only ever uses theta = alpha^2, so both are kept. Construct
/// from whichever is natural; the other is derived once.
class MburParam {
 public:
  /// Throws DomainError unless alpha is finite and > 0.
  explicit MburParam(double alpha);

  static MburParam from_theta(double theta);

  double alpha() const noexcept { return alpha_; }
  double theta() const noexcept { return theta_; }

 private:
  MburParam(double alpha, double theta) noexcept : alpha_(alpha), theta_(theta) {}

  double alpha_;
  double theta_;
};

// Densities and distribution functions. The theta-valued overloads exist
// for the regression code where every observation has its own theta.

double pdf(double y, const MburParam& p);
double log_pdf(double y, const MburParam& p);
double cdf(double y, const MburParam& p);
double quantile(double u, const MburParam& p);

/// log f(y; theta) written in terms of log(theta) so that theta may be
/// extreme (1e-300 or 1e300) without overflow. Requires 0 < y < 1.
double log_pdf_log_theta(double y, double log_theta);

/// F(y; theta) with y <= 0 -> 0 and y >= 1 -> 1.
double cdf_log_theta(double y, double log_theta);

/// Uniform draw strictly inside (0,1) from the top 53 bits of `rng`.
double open_unit_uniform(std::mt19937_64& rng);

/// Draws n variates by inverse transform. Same seed, same vector.
std::vector<double> sample(std::size_t n, const MburParam& p, std::uint64_t seed);

/// Sum of log_pdf over the data. Throws DomainError for any y outside (0,1).
double log_likelihood(std::span<const double> y, const MburParam& p);

struct DistFit {
  MburParam param{1.0};
  double loglik = 0.0;
  double var_alpha = 0.0;
  double se_alpha = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Maximum-likelihood fit of alpha.
///
/// The search runs over log(theta) in [-14, 14]: a coarse grid brackets the
/// maximum, Brent's method refines it to 1e-12, and one Newton step polishes.
/// The variance is the inverse observed information in alpha, from a central
/// second difference with step 1e-4 * alpha.
///
/// Requires n >= 2 and every y strictly inside (0,1); values within 1e-12 of
/// either boundary are rejected, not clamped.
DistFit fit_mle(std::span<const double> y);

/// Validates a response vector for likelihood work (n >= 1, every value in
/// (1e-12, 1 - 1e-12)). Throws DomainError naming the first offending index.
void check_unit_interval(std::span<const double> y);

}  // namespace mbur

#endif  // MBUR_DISTRIBUTION_HPP_

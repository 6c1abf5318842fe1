#include "mbur/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "mbur/error.hpp"

namespace mbur {

namespace {

template <std::size_t N>
double poly(const double (&coef)[N], double x) {
  double acc = coef[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * x + coef[i];
  return acc;
}

// Wichura (1988), Algorithm AS241 PPND16.
constexpr double kA[] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                         1.9715909503065514427e+3, 1.3731693765509461125e+4,
                         4.5921953931549871457e+4, 6.7265770927008700853e+4,
                         3.3430575583588128105e+4, 2.5090809287301226727e+3};
constexpr double kB[] = {1.0,
                         4.2313330701600911252e+1,
                         6.8718700749205790830e+2,
                         5.3941960214247511077e+3,
                         2.1213794301586595867e+4,
                         3.9307895800092710610e+4,
                         2.8729085735721942674e+4,
                         5.2264952788528545610e+3};
constexpr double kC[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                         5.76949722146069140550e0, 3.64784832476320460504e0,
                         1.27045825245236838258e0, 2.41780725177450611770e-1,
                         2.27238449892691845833e-2, 7.74545014278341407640e-4};
constexpr double kD[] = {1.0,
                         2.05319162663775882187e0,
                         1.67638483018380384940e0,
                         6.89767334985100004550e-1,
                         1.48103976427480074590e-1,
                         1.51986665636164571966e-2,
                         5.47593808499534494600e-4,
                         1.05075007164441684324e-9};
constexpr double kE[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                         1.78482653991729133580e0, 2.96560571828504891230e-1,
                         2.65321895265761230930e-2, 1.24266094738807843860e-3,
                         2.71155556874348757815e-5, 2.01033439929228813265e-7};
constexpr double kF[] = {1.0,
                         5.99832206555887937690e-1,
                         1.36929880922735805310e-1,
                         1.48753612908506148525e-2,
                         7.86869131145613259100e-4,
                         1.84631831751005468180e-5,
                         1.42151175831644588870e-7,
                         2.04426310338993978564e-15};

double exponential_cdf(double x) { return x <= 0.0 ? 0.0 : -std::expm1(-x); }

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal quantile needs p in (0,1), got " + std::to_string(p));
  }
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * poly(kA, r) / poly(kB, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double z = 0.0;
  if (r <= 5.0) {
    r -= 1.6;
    z = poly(kC, r) / poly(kD, r);
  } else {
    r -= 5.0;
    z = poly(kE, r) / poly(kF, r);
  }
  return q < 0.0 ? -z : z;
}

std::vector<double> rq_residuals(std::span<const double> f_values) {
  std::vector<double> out(f_values.size());
  std::transform(f_values.begin(), f_values.end(), out.begin(), normal_quantile);
  return out;
}

std::vector<double> cs_residuals(std::span<const double> f_values) {
  std::vector<double> out(f_values.size());
  for (std::size_t i = 0; i < f_values.size(); ++i) {
    const double f = f_values[i];
    if (!(f >= 0.0 && f < 1.0)) {
      throw DomainError("Cox-Snell residual needs F in [0,1), got " + std::to_string(f));
    }
    out[i] = -std::log1p(-f);
  }
  return out;
}

double kolmogorov_sf(double lambda) {
  if (!(lambda > 0.0)) return 1.0;
  if (lambda < 1.18) {
    // P(K <= lambda) = sqrt(2 pi) / lambda * sum exp(-(2k-1)^2 pi^2 / (8 lambda^2))
    const double w = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double m = 2.0 * k - 1.0;
      const double term = std::exp(-m * m * w);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return 1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum;
  }
  // P(K > lambda) = 2 sum (-1)^(k-1) exp(-2 k^2 lambda^2)
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DataError("KS test needs a non-empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double above = static_cast<double>(i + 1) / n - f;
    const double below = f - static_cast<double>(i) / n;
    d = std::max({d, above, below});
  }
  return d;
}

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf) {
  KsResult r;
  r.statistic = ks_statistic(sample, cdf);
  const double rn = std::sqrt(static_cast<double>(sample.size()));
  r.p_value = kolmogorov_sf((rn + 0.12 + 0.11 / rn) * r.statistic);
  return r;
}

InfoCriteria info_criteria(double loglik, std::size_t n_params, std::size_t n) {
  const double p = static_cast<double>(n_params);
  const double nn = static_cast<double>(n);
  InfoCriteria ic;
  ic.aic = -2.0 * loglik + 2.0 * p;
  if (n > n_params + 1) ic.caic = ic.aic + 2.0 * p * (p + 1.0) / (nn - p - 1.0);
  ic.bic = -2.0 * loglik + p * std::log(nn);
  ic.hqic = -2.0 * loglik + 2.0 * p * std::log(std::log(nn));
  return ic;
}

double r_squared_m(double loglik_null, double loglik_full, std::size_t n) {
  return -std::expm1((2.0 / static_cast<double>(n)) * (loglik_null - loglik_full));
}

double distance_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DataError("distance correlation needs equal-length inputs");
  if (x.size() < 2) throw DataError("distance correlation needs at least two points");
  const std::size_t n = x.size();

  const auto centred = [n](std::span<const double> v) {
    std::vector<double> d(n * n);
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double dij = std::fabs(v[i] - v[j]);
        d[i * n + j] = dij;
        row_mean[i] += dij;
      }
      grand += row_mean[i];
      row_mean[i] /= static_cast<double>(n);
    }
    grand /= static_cast<double>(n * n);
    // distance matrices are symmetric: column means equal row means
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i * n + j] += grand - row_mean[i] - row_mean[j];
    }
    return d;
  };

  const auto a = centred(x);
  const auto b = centred(y);
  double ab = 0.0;
  double aa = 0.0;
  double bb = 0.0;
  for (std::size_t k = 0; k < n * n; ++k) {
    ab += a[k] * b[k];
    aa += a[k] * a[k];
    bb += b[k] * b[k];
  }
  if (aa <= 0.0 || bb <= 0.0) return 0.0;
  const double ratio = ab / std::sqrt(aa * bb);
  return std::sqrt(std::clamp(ratio, 0.0, 1.0));
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> residuals,
                                                 Reference reference) {
  std::vector<double> sorted(residuals.begin(), residuals.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> out;
  out.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double p = (static_cast<double>(i) + 0.5) / n;
    const double ref = reference == Reference::Normal ? normal_quantile(p) : -std::log1p(-p);
    out.emplace_back(ref, sorted[i]);
  }
  return out;
}

DiagnosticsReport diagnose(std::span<const double> f_values, double loglik, std::size_t n_params,
                           std::optional<double> loglik_null) {
  // Fitted CDF values can round to exactly 0 or 1 in the far tails; keep
  // them inside the open interval so both residual maps stay finite.
  constexpr double kLo = std::numeric_limits<double>::min();
  constexpr double kHi = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  std::vector<double> f(f_values.begin(), f_values.end());
  for (auto& v : f) v = std::clamp(v, kLo, kHi);

  DiagnosticsReport rep;
  rep.rq = rq_residuals(f);
  rep.cs = cs_residuals(f);
  rep.ks_rq = ks_test(rep.rq, normal_cdf);
  rep.ks_cs = ks_test(rep.cs, exponential_cdf);
  rep.criteria = info_criteria(loglik, n_params, f.size());
  if (loglik_null) rep.r2m = r_squared_m(*loglik_null, loglik, f.size());
  rep.qq_rq = qq_points(rep.rq, Reference::Normal);
  rep.qq_cs = qq_points(rep.cs, Reference::Exponential);
  return rep;
}

}  // namespace mbur

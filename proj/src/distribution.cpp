#include "mbur/distribution.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "mbur/error.hpp"
#include "mbur/quantile_link.hpp"
#include "numeric.hpp"

namespace mbur {

namespace {

constexpr double kBoundaryGuard = 1e-12;
constexpr double kLog6 = 1.791759469228055;
constexpr double kLogThetaLo = -14.0;
constexpr double kLogThetaHi = 14.0;

void check_open_unit(double y, const char* what) {
  if (!(y > 0.0 && y < 1.0)) {
    throw DomainError(std::string(what) + " must lie in (0,1), got " + std::to_string(y));
  }
}


// d^2 l_i / d log(theta)^2. With dt/dlog(theta) = -t and
// r(t) = t e^t / (1 - e^t), r'(t) = e^t (1 + t - e^t) / (1 - e^t)^2.
double d2loglik_dlogtheta2(double t) {
  double dr = 0.0;
  if (t > -700.0) {
    const double em1 = std::expm1(t);
    dr = std::exp(t) * (t - em1) / (em1 * em1);
  }
  return -t * (dr - 2.0);
}

struct LogThetaSums {
  double loglik = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

LogThetaSums loglik_in_log_theta(std::span<const double> y, double log_theta) {
  LogThetaSums s;
  const double inv_theta = std::exp(-log_theta);
  for (double yi : y) {
    const double t = std::log(yi) * inv_theta;
    s.loglik += log_pdf_log_theta(yi, log_theta);
    s.d1 += detail::dloglik_dlogtheta(t);
    s.d2 += d2loglik_dlogtheta2(t);
  }
  return s;
}

double loglik_theta(std::span<const double> y, double log_theta) {
  double total = 0.0;
  for (double yi : y) total += log_pdf_log_theta(yi, log_theta);
  return total;
}

}  // namespace

MburParam::MburParam(double alpha) : alpha_(alpha), theta_(alpha * alpha) {
  if (!(std::isfinite(alpha) && alpha > 0.0)) {
    throw DomainError("alpha must be finite and positive, got " + std::to_string(alpha));
  }
}

MburParam MburParam::from_theta(double theta) {
  if (!(std::isfinite(theta) && theta > 0.0)) {
    throw DomainError("theta must be finite and positive, got " + std::to_string(theta));
  }
  return MburParam(std::sqrt(theta), theta);
}

double log_pdf_log_theta(double y, double log_theta) {
  const double log_y = std::log(y);
  const double t = log_y * std::exp(-log_theta);
  return kLog6 - log_theta + detail::log1mexp(t) + 2.0 * t - log_y;
}

double cdf_log_theta(double y, double log_theta) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double s = std::exp(std::log(y) * std::exp(-log_theta));
  return s * s * (3.0 - 2.0 * s);
}

double pdf(double y, const MburParam& p) { return std::exp(log_pdf(y, p)); }

double log_pdf(double y, const MburParam& p) {
  check_open_unit(y, "y");
  return log_pdf_log_theta(y, std::log(p.theta()));
}

double cdf(double y, const MburParam& p) { return cdf_log_theta(y, std::log(p.theta())); }

double quantile(double u, const MburParam& p) {
  check_open_unit(u, "u");
  return std::exp(p.theta() * std::log(compute_c(u)));
}

double open_unit_uniform(std::mt19937_64& rng) {
  // offset by half an ulp so the result is never 0 or 1
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

std::vector<double> sample(std::size_t n, const MburParam& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> draws(n);
  for (auto& d : draws) d = quantile(open_unit_uniform(rng), p);
  return draws;
}

void check_unit_interval(std::span<const double> y) {
  if (y.empty()) throw DomainError("response is empty");
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (!(y[i] > kBoundaryGuard && y[i] < 1.0 - kBoundaryGuard)) {
      throw DomainError("response[" + std::to_string(i) + "] = " + std::to_string(y[i]) +
                        " is not strictly inside (0,1)");
    }
  }
}

double log_likelihood(std::span<const double> y, const MburParam& p) {
  check_unit_interval(y);
  return loglik_theta(y, std::log(p.theta()));
}

DistFit fit_mle(std::span<const double> y) {
  if (y.size() < 2) throw DomainError("fit_mle needs at least two observations");
  check_unit_interval(y);

  // Coarse scan to bracket the global maximum.
  constexpr int kGrid = 57;
  const double step = (kLogThetaHi - kLogThetaLo) / (kGrid - 1);
  int best = 0;
  double best_ll = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double ll = loglik_theta(y, kLogThetaLo + i * step);
    if (ll > best_ll) {
      best_ll = ll;
      best = i;
    }
  }
  const double lo = kLogThetaLo + std::max(best - 1, 0) * step;
  const double hi = kLogThetaLo + std::min(best + 1, kGrid - 1) * step;

  std::uintmax_t iters = 200;
  const auto [log_theta_brent, neg_ll] = boost::math::tools::brent_find_minima(
      [&](double lt) { return -loglik_theta(y, lt); }, lo, hi, 40, iters);
  (void)neg_ll;

  double log_theta = log_theta_brent;
  const auto sums = loglik_in_log_theta(y, log_theta);
  if (sums.d2 < 0.0) {
    const double polished = log_theta - sums.d1 / sums.d2;
    if (polished > kLogThetaLo && polished < kLogThetaHi &&
        loglik_theta(y, polished) >= sums.loglik) {
      log_theta = polished;
    }
  }

  DistFit fit;
  fit.param = MburParam::from_theta(std::exp(log_theta));
  fit.loglik = loglik_theta(y, log_theta);
  fit.iterations = static_cast<int>(iters);

  const double a = fit.param.alpha();
  const double h = a * 1e-4;
  const auto ll_alpha = [&](double alpha) { return loglik_theta(y, 2.0 * std::log(alpha)); };
  const double curvature = (ll_alpha(a + h) - 2.0 * fit.loglik + ll_alpha(a - h)) / (h * h);
  fit.var_alpha = curvature < 0.0 ? -1.0 / curvature : std::numeric_limits<double>::quiet_NaN();
  fit.se_alpha = std::sqrt(fit.var_alpha);

  const bool interior = log_theta > kLogThetaLo + step && log_theta < kLogThetaHi - step;
  fit.converged = iters < 200 && interior && std::isfinite(fit.var_alpha);
  return fit;
}

}  // namespace mbur

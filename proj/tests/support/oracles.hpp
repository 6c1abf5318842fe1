// Independent reference computations for the test suites. Nothing here
// calls into the library code paths it is used to check.
#ifndef MBUR_TESTS_ORACLES_HPP_
#define MBUR_TESTS_ORACLES_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

namespace mbur::oracle {

/// Root of 3c^2 - 2c^3 = u on (0,1) by bisection.
inline double bisect_c(double u) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (3 * mid * mid - 2 * mid * mid * mid < u) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Direct formula, no log-space tricks.
inline double mbur_pdf(double y, double alpha) {
  const double th = alpha * alpha;
  return 6.0 / th * (1.0 - std::pow(y, 1.0 / th)) * std::pow(y, 2.0 / th - 1.0);
}

inline double mbur_cdf(double y, double alpha) {
  const double th = alpha * alpha;
  return 3.0 * std::pow(y, 2.0 / th) - 2.0 * std::pow(y, 3.0 / th);
}

namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}
}  // namespace detail

/// Adaptive Simpson quadrature.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson(f, a, b, fa, fm, fb, whole, tol, 60);
}

/// Integral of the MBUR pdf over (a, b) after substituting y = t^theta,
/// which turns the integrand into the smooth polynomial 6 t (1 - t) and
/// removes the endpoint singularity for large theta. The pdf is still
/// evaluated through the direct formula.
inline double integrate_pdf(double alpha, double a, double b, double tol = 1e-13) {
  const double th = alpha * alpha;
  const auto g = [&](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    const double y = std::pow(t, th);
    if (y <= 0.0) return 0.0;
    return mbur_pdf(y, alpha) * th * std::pow(t, th - 1.0);
  };
  return integrate(g, std::pow(a, 1.0 / th), std::pow(b, 1.0 / th), tol);
}

/// erf from its Maclaurin series for |x| <= 3 and the erfc continued
/// fraction beyond; independent of std::erf.
inline constexpr long double kSqrtPi = 1.772453850905516027298167483341145183L;

/// erfc(x) for x > 3 by backward evaluation of its continued fraction.
inline long double erfc_cf(double x) {
  long double k = x;
  for (int j = 300; j >= 1; --j) k = x + (j / 2.0L) / k;
  return std::exp(-static_cast<long double>(x) * x) / (kSqrtPi * k);
}

inline double erf_series(double x) {
  const long double sqrt_pi = kSqrtPi;
  const double ax = std::fabs(x);
  if (ax > 3.0) {
    const long double erfc = erfc_cf(ax);
    return static_cast<double>(x > 0 ? 1.0L - erfc : erfc - 1.0L);
  }
  long double term = x;
  long double sum = x;
  const long double x2 = static_cast<long double>(x) * x;
  for (int n = 1; n < 400; ++n) {
    term *= -x2 / n;
    const long double add = term / (2 * n + 1);
    sum += add;
    if (std::fabs(static_cast<double>(add)) < 1e-22) break;
  }
  return static_cast<double>(sum * 2.0L / sqrt_pi);
}

inline double normal_cdf_series(double z) {
  const double x = z / std::sqrt(2.0);
  if (x < -3.0) return static_cast<double>(0.5L * erfc_cf(-x));
  return 0.5 * (1.0 + erf_series(x));
}

/// Normal quantile by bisection on the series CDF.
inline double normal_quantile_bisect(double p) {
  double lo = -40.0;
  double hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf_series(mid) < p) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// KS statistic as the maximum over all 2n empirical-CDF gaps, found by
/// scanning every sample point and both sides without sorting tricks.
inline double ks_brute(std::span<const double> sample, const std::function<double(double)>& cdf) {
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (double s : sample) {
    double below = 0.0;  // #{x < s}
    double at_or_below = 0.0;
    for (double t : sample) {
      if (t < s) below += 1.0;
      if (t <= s) at_or_below += 1.0;
    }
    const double f = cdf(s);
    d = std::max(d, std::fabs(at_or_below / n - f));
    d = std::max(d, std::fabs(f - below / n));
  }
  return d;
}

/// Distance correlation from the V-statistic expansion
/// dCov^2 = S1 + S2 - 2 S3 (Szekely, Rizzo, Bakirov), without double
/// centering.
inline double dcor_vstat(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  const auto dcov2 = [n](std::span<const double> a, std::span<const double> b) {
    long double s1 = 0, sa = 0, sb = 0, s3 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      long double ra = 0, rb = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const long double da = std::fabs(a[i] - a[j]);
        const long double db = std::fabs(b[i] - b[j]);
        s1 += da * db;
        sa += da;
        sb += db;
        ra += da;
        rb += db;
      }
      s3 += ra * rb;
    }
    const long double nn = static_cast<long double>(n);
    return static_cast<double>(s1 / (nn * nn) + (sa / (nn * nn)) * (sb / (nn * nn)) -
                               2.0L * s3 / (nn * nn * nn));
  };
  const double vxy = dcov2(x, y);
  const double vx = dcov2(x, x);
  const double vy = dcov2(y, y);
  if (vx <= 0 || vy <= 0) return 0.0;
  return std::sqrt(std::max(0.0, vxy) / std::sqrt(vx * vy));
}

/// Central finite-difference gradient.
inline Eigen::VectorXd fd_gradient(const std::function<double(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& at, double h = 1e-6) {
  Eigen::VectorXd g(at.size());
  for (Eigen::Index j = 0; j < at.size(); ++j) {
    Eigen::VectorXd up = at;
    Eigen::VectorXd dn = at;
    up[j] += h;
    dn[j] -= h;
    g[j] = (f(up) - f(dn)) / (2.0 * h);
  }
  return g;
}

/// Central finite-difference Hessian.
inline Eigen::MatrixXd fd_hessian(const std::function<double(const Eigen::VectorXd&)>& f,
                                  const Eigen::VectorXd& at, double h = 1e-4) {
  const auto p = at.size();
  Eigen::MatrixXd hess(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      const auto shifted = [&](double di, double dj) {
        Eigen::VectorXd v = at;
        v[i] += di;
        v[j] += dj;
        return f(v);
      };
      hess(i, j) = (shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)) /
                   (4.0 * h * h);
    }
  }
  return 0.5 * (hess + hess.transpose());
}

/// Beta(2,2) draws as the median of three independent uniforms.
inline std::vector<double> beta22_draws(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out(n);
  for (auto& v : out) {
    double a = unif(rng), b = unif(rng), c = unif(rng);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    v = b;
  }
  return out;
}

}  // namespace mbur::oracle

#endif  // MBUR_TESTS_ORACLES_HPP_

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support/oracles.hpp"
#include "mbur/dataio.hpp"
#include "mbur/diagnostics.hpp"
#include "mbur/distribution.hpp"
#include "mbur/error.hpp"

using namespace mbur;

TEST_CASE("MburParam keeps theta = alpha^2") {
  const MburParam p(2.403);
  CHECK(p.theta() == doctest::Approx(2.403 * 2.403).epsilon(1e-15));
  const auto q = MburParam::from_theta(4.0);
  CHECK(q.alpha() == 2.0);
  CHECK_THROWS_AS(MburParam(0.0), DomainError);
  CHECK_THROWS_AS(MburParam(-1.0), DomainError);
  CHECK_THROWS_AS(MburParam(std::nan("")), DomainError);
  CHECK_THROWS_AS(MburParam::from_theta(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("pdf and log_pdf at hand-evaluated points") {
  const MburParam one(1.0);
  CHECK(pdf(0.5, one) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(pdf(0.25, one) == doctest::Approx(1.125).epsilon(1e-14));
  CHECK(log_pdf(0.5, one) == doctest::Approx(std::log(1.5)).epsilon(1e-14));
  CHECK(log_pdf(0.25, one) == doctest::Approx(0.117783035656383).epsilon(1e-12));
  CHECK_THROWS_AS(pdf(0.0, one), DomainError);
  CHECK_THROWS_AS(pdf(1.0, one), DomainError);
  CHECK_THROWS_AS(log_pdf(-0.2, one), DomainError);
}

TEST_CASE("log_pdf agrees with the direct formula and exp(log_pdf) = pdf") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uy(0.001, 0.999);
  std::uniform_real_distribution<double> ua(0.3, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double y = uy(rng);
    const double a = ua(rng);
    const MburParam p(a);
    const double direct = oracle::mbur_pdf(y, a);
    CHECK(std::exp(log_pdf(y, p)) == doctest::Approx(pdf(y, p)).epsilon(1e-12));
    CHECK(pdf(y, p) == doctest::Approx(direct).epsilon(1e-10));
  }
}

TEST_CASE("pdf integrates to one") {
  for (double a : {0.3, 1.0, 2.403, 5.0}) {
    CAPTURE(a);
    CHECK(std::fabs(oracle::integrate_pdf(a, 0.0, 1.0) - 1.0) < 1e-8);
  }
}

TEST_CASE("cdf values, clamping and agreement with the integrated pdf") {
  CHECK(cdf(0.5, MburParam(1.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(cdf(0.0625, MburParam(2.0)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(cdf(-1.0, MburParam(1.0)) == 0.0);
  CHECK(cdf(0.0, MburParam(1.0)) == 0.0);
  CHECK(cdf(1.0, MburParam(1.0)) == 1.0);
  CHECK(cdf(3.0, MburParam(1.0)) == 1.0);
  for (double a : {0.3, 1.0, 2.403, 5.0}) {
    for (double y : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
      CAPTURE(a);
      CAPTURE(y);
      CHECK(std::fabs(cdf(y, MburParam(a)) - oracle::integrate_pdf(a, 0.0, y)) < 1e-8);
    }
  }
}

TEST_CASE("Median identity and monotone cdf") {
  for (double a : {0.3, 1.0, 2.403, 5.0}) {
    const MburParam p(a);
    CHECK(std::fabs(cdf(std::pow(0.5, p.theta()), p) - 0.5) < 1e-12);
    double prev = 0.0;
    for (int i = 1; i < 10000; ++i) {
      const double f = cdf(i / 10000.0, p);
      CHECK(f >= prev);
      prev = f;
    }
  }
}

TEST_CASE("quantile inverts cdf") {
  CHECK(quantile(0.5, MburParam(2.0)) == doctest::Approx(0.0625).epsilon(1e-14));
  CHECK(quantile(0.25, MburParam(1.0)) == doctest::Approx(oracle::bisect_c(0.25)).epsilon(1e-14));
  CHECK(quantile(0.25, MburParam(1.0)) == doctest::Approx(0.32635182233306965).epsilon(1e-14));
  for (double a : {0.3, 1.0, 2.403, 5.0}) {
    const MburParam p(a);
    for (int i = 1; i <= 1000; ++i) {
      const double u = i / 1001.0;
      CHECK(std::fabs(cdf(quantile(u, p), p) - u) < 1e-10);
    }
  }
  CHECK_THROWS_AS(quantile(0.0, MburParam(1.0)), DomainError);
  CHECK_THROWS_AS(quantile(1.0, MburParam(1.0)), DomainError);
}

TEST_CASE("sampling is deterministic and follows the law") {
  const auto a = sample(100, MburParam(1.3), 42);
  const auto b = sample(100, MburParam(1.3), 42);
  const auto c = sample(100, MburParam(1.3), 43);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(std::all_of(a.begin(), a.end(), [](double v) { return v > 0.0 && v < 1.0; }));

  const MburParam one(1.0);
  const auto draws = sample(100000, one, 7);
  CHECK(ks_statistic(draws, [&](double v) { return oracle::mbur_cdf(v, 1.0); }) < 0.01);

  auto two = sample(100000, MburParam(2.0), 8);
  std::nth_element(two.begin(), two.begin() + 50000, two.end());
  CHECK(std::fabs(two[50000] - 0.0625) < 0.005);
}

TEST_CASE("Beta(2,2)^theta has the MBUR cdf") {
  const double alpha = 1.7;
  const double theta = alpha * alpha;
  auto t = oracle::beta22_draws(100000, 99);
  for (auto& v : t) v = std::pow(v, theta);
  CHECK(ks_statistic(t, [&](double v) { return cdf(v, MburParam(alpha)); }) < 0.01);
}

TEST_CASE("fit_mle on the OECD response") {
  const auto data = load_builtin_oecd(true);
  const auto fit = fit_mle(data.response);
  CHECK(fit.converged);
  // published: alpha 2.403, loglik 67.8896
  CHECK(std::fabs(fit.param.alpha() - 2.403) < 0.01);
  CHECK(std::fabs(fit.loglik - 67.8896) < 0.05);
  // frozen from an independent bounded scalar optimiser
  CHECK(fit.param.alpha() == doctest::Approx(2.402993698).epsilon(1e-8));
  CHECK(fit.loglik == doctest::Approx(67.889623019).epsilon(1e-10));

  CHECK(fit.se_alpha == doctest::Approx(std::sqrt(fit.var_alpha)).epsilon(1e-15));
  CHECK(fit.loglik == doctest::Approx(log_likelihood(data.response, fit.param)).epsilon(1e-15));

  // stationarity in theta, central differences
  const double th = fit.param.theta();
  const double h = th * 1e-6;
  const auto ll = [&](double t) { return log_likelihood(data.response, MburParam::from_theta(t)); };
  CHECK(std::fabs((ll(th + h) - ll(th - h)) / (2 * h)) < 1e-6);

  // no better point on a coarse grid
  for (double lt = -5.0; lt <= 5.0; lt += 0.05) {
    CHECK(fit.loglik >= ll(std::exp(lt)));
  }
}

TEST_CASE("fit_mle recovers alpha from simulated data") {
  const auto y = sample(10000, MburParam(1.0), 2024);
  const auto fit = fit_mle(y);
  CHECK(fit.converged);
  CHECK(std::fabs(fit.param.alpha() - 1.0) < 0.02);
}

TEST_CASE("fit_mle rejects bad input") {
  CHECK_THROWS_AS(fit_mle(std::vector<double>{0.5}), DomainError);
  CHECK_THROWS_AS(fit_mle(std::vector<double>{0.5, 1.0}), DomainError);
  CHECK_THROWS_AS(fit_mle(std::vector<double>{0.5, 0.0}), DomainError);
  CHECK_THROWS_AS(fit_mle(std::vector<double>{0.5, 1e-13}), DomainError);
  CHECK_THROWS_AS(fit_mle(std::vector<double>{0.5, 1.0 - 1e-13}), DomainError);
  CHECK_NOTHROW(fit_mle(std::vector<double>{0.2, 0.4}));
}

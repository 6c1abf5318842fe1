#include "mbur/quantile_link.hpp"

#include <cmath>
#include <numbers>

#include "mbur/error.hpp"
#include "numeric.hpp"

namespace mbur {

namespace {

constexpr double kMinLevel = 1e-6;
// Beyond this, log(1 + e^-phi) == e^-phi to double precision.
constexpr double kLogitAsymptote = 35.0;

}  // namespace

std::string_view to_string(Link link) noexcept {
  switch (link) {
    case Link::Logit:
      return "logit";
    case Link::LogLog:
      return "loglog";
  }
  return "unknown";
}

Link parse_link(std::string_view name) {
  if (name == "logit") return Link::Logit;
  if (name == "loglog" || name == "log-log") return Link::LogLog;
  throw DomainError("unknown link '" + std::string(name) + "' (expected logit or loglog)");
}

double compute_c(double u) {
  if (!(u > 0.0 && u < 1.0)) {
    throw DomainError("quantile level must lie in (0,1), got " + std::to_string(u));
  }
  const double a = std::acos(1.0 - 2.0 * u) / 3.0;
  double c = -0.5 * (std::cos(a) - std::numbers::sqrt3 * std::sin(a)) + 0.5;
  // One Newton step on 3c^2 - 2c^3 - u recovers the digits lost to
  // cancellation near u = 0.
  const double slope = 6.0 * c * (1.0 - c);
  if (slope > 0.0) c -= (c * c * (3.0 - 2.0 * c) - u) / slope;
  return c;
}

QuantileSpec::QuantileSpec(double u, Link link) : u_(u), c_(0.0), ln_c_(0.0), link_(link) {
  if (!(u > kMinLevel && u < 1.0 - kMinLevel)) {
    throw DomainError("quantile level must lie in (1e-6, 1 - 1e-6), got " + std::to_string(u));
  }
  c_ = compute_c(u);
  ln_c_ = std::log(c_);
}

double link_inverse(Link link, double phi) {
  switch (link) {
    case Link::Logit:
      if (phi >= 0.0) return 1.0 / (1.0 + std::exp(-phi));
      return std::exp(phi) / (1.0 + std::exp(phi));
    case Link::LogLog:
      return std::exp(-std::exp(phi));
  }
  return 0.0;
}

double log_link_inverse(Link link, double phi) {
  switch (link) {
    case Link::Logit:
      return -detail::softplus(-phi);
    case Link::LogLog:
      return -std::exp(phi);
  }
  return 0.0;
}

double log_theta_from_phi(const QuantileSpec& spec, double phi) {
  const double log_neg_ln_c = std::log(-spec.ln_c());
  switch (spec.link()) {
    case Link::Logit:
      // -log(mu) = softplus(-phi) ~ e^-phi for large phi.
      if (phi > kLogitAsymptote) return -phi - log_neg_ln_c;
      return std::log(detail::softplus(-phi)) - log_neg_ln_c;
    case Link::LogLog:
      return phi - log_neg_ln_c;
  }
  return 0.0;
}

double theta_from_phi(const QuantileSpec& spec, double phi) {
  return std::exp(log_theta_from_phi(spec, phi));
}

double dlog_theta_dphi(const QuantileSpec& spec, double phi) {
  switch (spec.link()) {
    case Link::Logit: {
      if (phi > kLogitAsymptote) return -1.0;
      // -(1 - mu) / softplus(-phi)
      const double one_minus_mu = link_inverse(Link::Logit, -phi);
      return -one_minus_mu / detail::softplus(-phi);
    }
    case Link::LogLog:
      return 1.0;
  }
  return 0.0;
}

}  // namespace mbur

#ifndef MBUR_QUANTILE_LINK_HPP_
#define MBUR_QUANTILE_LINK_HPP_

#include <string>
#include <string_view>

namespace mbur {

enum class Link { Logit, LogLog };

std::string_view to_string(Link link) noexcept;

/// Parses "logit" or "loglog" (also "log-log"). Throws DomainError otherwise.
Link parse_link(std::string_view name);

/// u-quantile of the theta = 1 base law, i.e. the root in (0,1) of
/// 3c^2 - 2c^3 = u, via the trigonometric closed form.
double compute_c(double u);

/// A modelled quantile level together with its link. Levels are accepted in
/// (1e-6, 1 - 1e-6).
class QuantileSpec {
 public:
  QuantileSpec(double u, Link link);

  double u() const noexcept { return u_; }
  double c() const noexcept { return c_; }
  double ln_c() const noexcept { return ln_c_; }
  Link link() const noexcept { return link_; }

 private:
  double u_;
  double c_;
  double ln_c_;
  Link link_;
};

/// Modelled quantile for linear predictor phi:
/// Logit e^phi / (1 + e^phi), LogLog exp(-exp(phi)).
double link_inverse(Link link, double phi);

/// log of the linear-predictor's modelled quantile, log(link_inverse).
double log_link_inverse(Link link, double phi);

/// theta = log(link_inverse(phi)) / log(c). Always > 0 for finite phi.
double theta_from_phi(const QuantileSpec& spec, double phi);

/// log(theta_from_phi), evaluated without forming theta.
double log_theta_from_phi(const QuantileSpec& spec, double phi);

/// d log(theta) / d phi. Exactly 1 for LogLog; -(1 - mu) / (-log mu) for
/// Logit, which tends to -1 as phi grows.
double dlog_theta_dphi(const QuantileSpec& spec, double phi);

}  // namespace mbur

#endif  // MBUR_QUANTILE_LINK_HPP_

#include "mbur/quantreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mbur/distribution.hpp"
#include "mbur/error.hpp"
#include "numeric.hpp"

namespace mbur {

namespace {

constexpr double kLambdaCeiling = 1e16;

void check_shapes(const Eigen::VectorXd& beta, const DesignMatrix& x, std::span<const double> y) {
  if (beta.size() != x.cols()) {
    throw DomainError("beta has " + std::to_string(beta.size()) + " entries, design has " +
                      std::to_string(x.cols()) + " columns");
  }
  if (static_cast<Eigen::Index>(y.size()) != x.rows()) {
    throw DomainError("response has " + std::to_string(y.size()) + " entries, design has " +
                      std::to_string(x.rows()) + " rows");
  }
  if (!beta.allFinite()) throw DomainError("beta has non-finite entries");
}


struct Objective {
  double value = 0.0;
  // Rounding bound on `value`: a few ulps of the summed term magnitudes.
  double noise = 0.0;
};

Objective objective(const Eigen::VectorXd& beta, const DesignMatrix& x, std::span<const double> y,
                    const QuantileSpec& spec) {
  const Eigen::VectorXd phi = x.matrix() * beta;
  double total = 0.0;
  double magnitude = 0.0;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const double term =
        log_pdf_log_theta(y[static_cast<std::size_t>(i)], log_theta_from_phi(spec, phi[i]));
    total -= term;
    magnitude += std::fabs(term);
  }
  if (!std::isfinite(total)) return {std::numeric_limits<double>::infinity(), 0.0};
  return {total, 16.0 * std::numeric_limits<double>::epsilon() * magnitude};
}

double neg_loglik_unchecked(const Eigen::VectorXd& beta, const DesignMatrix& x,
                            std::span<const double> y, const QuantileSpec& spec) {
  return objective(beta, x, y, spec).value;
}

double score_norm(const Eigen::VectorXd& beta, const DesignMatrix& x, std::span<const double> y,
                  const QuantileSpec& spec);

Eigen::MatrixXd score_unchecked(const Eigen::VectorXd& beta, const DesignMatrix& x,
                                std::span<const double> y, const QuantileSpec& spec) {
  const Eigen::VectorXd phi = x.matrix() * beta;
  Eigen::VectorXd chain(phi.size());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const double log_theta = log_theta_from_phi(spec, phi[i]);
    const double t = std::log(y[static_cast<std::size_t>(i)]) * std::exp(-log_theta);
    chain[i] = detail::dloglik_dlogtheta(t) * dlog_theta_dphi(spec, phi[i]);
  }
  return x.matrix().array().colwise() * chain.array();
}

double score_norm(const Eigen::VectorXd& beta, const DesignMatrix& x, std::span<const double> y,
                  const QuantileSpec& spec) {
  return score_unchecked(beta, x, y, spec).colwise().sum().lpNorm<Eigen::Infinity>();
}

double type7_quantile(std::span<const double> y, double p) {
  std::vector<double> sorted(y.begin(), y.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

std::string_view to_string(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::Gradient:
      return "gradient";
    case StopReason::Step:
      return "step";
    case StopReason::MaxIter:
      return "max_iter";
    case StopReason::Stalled:
      return "stalled";
    case StopReason::InfeasibleStart:
      return "infeasible_start";
  }
  return "unknown";
}

DesignMatrix::DesignMatrix(Prebuilt, Eigen::MatrixXd x, std::vector<std::string> names)
    : x_(std::move(x)), names_(std::move(names)) {}

DesignMatrix::DesignMatrix(const Eigen::MatrixXd& covariates,
                           std::vector<std::string> covariate_names) {
  const Eigen::Index n = covariates.rows();
  const Eigen::Index k = covariates.cols();
  if (!covariate_names.empty() && static_cast<Eigen::Index>(covariate_names.size()) != k) {
    throw DomainError("got " + std::to_string(covariate_names.size()) + " names for " +
                      std::to_string(k) + " covariates");
  }
  if (n < k + 2) {
    throw DomainError("need more observations than coefficients: n = " + std::to_string(n) +
                      ", coefficients = " + std::to_string(k + 1));
  }
  if (!covariates.allFinite()) throw DomainError("covariates contain non-finite values");

  x_.resize(n, k + 1);
  x_.col(0).setOnes();
  x_.rightCols(k) = covariates;
  names_.reserve(static_cast<std::size_t>(k + 1));
  names_.emplace_back("(intercept)");
  for (Eigen::Index j = 0; j < k; ++j) {
    names_.push_back(covariate_names.empty() ? "x" + std::to_string(j + 1)
                                             : covariate_names[static_cast<std::size_t>(j)]);
  }
}

DesignMatrix DesignMatrix::intercept_only(Eigen::Index n) {
  if (n < 2) throw DomainError("intercept-only design needs at least two rows");
  return DesignMatrix(Prebuilt{}, Eigen::MatrixXd::Ones(n, 1), {"(intercept)"});
}

double neg_loglik(const Eigen::VectorXd& beta, const DesignMatrix& x, std::span<const double> y,
                  const QuantileSpec& spec) {
  check_shapes(beta, x, y);
  check_unit_interval(y);
  return neg_loglik_unchecked(beta, x, y, spec);
}

Eigen::MatrixXd score(const Eigen::VectorXd& beta, const DesignMatrix& x,
                      std::span<const double> y, const QuantileSpec& spec) {
  check_shapes(beta, x, y);
  check_unit_interval(y);
  return score_unchecked(beta, x, y, spec);
}

Eigen::VectorXd default_init(const DesignMatrix& x, std::span<const double> y,
                             const QuantileSpec& spec) {
  Eigen::VectorXd init = Eigen::VectorXd::Zero(x.cols());
  if (y.empty()) return init;
  const double q = type7_quantile(y, spec.u());
  double b0 = std::numeric_limits<double>::quiet_NaN();
  if (q > 0.0 && q < 1.0) {
    b0 = spec.link() == Link::Logit ? std::log(q / (1.0 - q)) : std::log(-std::log(q));
  }
  if (std::isfinite(b0)) init[0] = b0;
  return init;
}

FitResult lm_fit(const DesignMatrix& x, std::span<const double> y, const QuantileSpec& spec,
                 const Eigen::VectorXd& init, const LmConfig& cfg) {
  check_shapes(init, x, y);
  check_unit_interval(y);

  const auto p = x.cols();
  const double n = static_cast<double>(x.rows());
  const double grad_limit = cfg.grad_tol * n;

  FitResult fit;
  fit.spec = spec;
  fit.beta = init;
  double lambda = cfg.lambda0;
  Objective obj = objective(fit.beta, x, y, spec);
  double f = obj.value;
  fit.stop = StopReason::MaxIter;

  if (!std::isfinite(f)) {
    fit.stop = StopReason::InfeasibleStart;
  } else {
    int iter = 0;
    bool done = false;
    while (!done && iter < cfg.max_iter) {
      const Eigen::MatrixXd g_rows = score_unchecked(fit.beta, x, y, spec);
      const Eigen::VectorXd grad = g_rows.colwise().sum().transpose();
      const double grad_norm = grad.lpNorm<Eigen::Infinity>();
      if (grad_norm < grad_limit) {
        fit.stop = StopReason::Gradient;
        break;
      }
      const Eigen::MatrixXd info = g_rows.transpose() * g_rows;

      // Retry with heavier damping until a step lowers the objective.
      while (iter < cfg.max_iter) {
        ++iter;
        const Eigen::MatrixXd damped = info + lambda * Eigen::MatrixXd::Identity(p, p);
        const Eigen::LDLT<Eigen::MatrixXd> solver(damped);
        Eigen::VectorXd delta;
        bool ok = solver.info() == Eigen::Success && solver.isPositive();
        if (ok) {
          delta = solver.solve(grad);
          ok = delta.allFinite();
        }
        Objective trial{std::numeric_limits<double>::infinity(), 0.0};
        if (ok) trial = objective(fit.beta + delta, x, y, spec);
        const double f_new = trial.value;

        // Near the optimum the decrease falls below rounding noise; a step
        // that keeps the objective level within that noise is still taken
        // if it shrinks the score.
        bool accepted = ok && f_new < f;
        if (!accepted && ok && std::isfinite(f_new) &&
            std::fabs(f_new - f) <= std::max(obj.noise, trial.noise)) {
          accepted = score_norm(fit.beta + delta, x, y, spec) < grad_norm;
        }
        fit.trace.push_back({iter, accepted ? f_new : f, lambda, grad_norm, accepted});
        if (accepted) {
          fit.beta += delta;
          f = f_new;
          obj = trial;
          lambda *= cfg.lambda_down;
          const double scale = 1.0 + fit.beta.lpNorm<Eigen::Infinity>();
          if (delta.lpNorm<Eigen::Infinity>() < cfg.step_tol * scale) {
            fit.stop = StopReason::Step;
            done = true;
          }
          break;
        }
        lambda *= cfg.lambda_up;
        if (lambda > kLambdaCeiling) {
          fit.stop = StopReason::Stalled;
          done = true;
          break;
        }
      }
    }
    fit.iterations = iter;
  }

  fit.lambda_final = lambda;
  fit.loglik = -f;
  const Eigen::MatrixXd g_rows = score_unchecked(fit.beta, x, y, spec);
  fit.grad_norm = g_rows.colwise().sum().lpNorm<Eigen::Infinity>();
  fit.converged = std::isfinite(f) && fit.grad_norm < grad_limit;
  if (fit.converged && fit.stop != StopReason::Step) fit.stop = StopReason::Gradient;

  const Vcov v = vcov_of(g_rows);
  fit.vcov = v.matrix;
  fit.vcov_singular = v.singular;
  fit.se = fit.vcov.diagonal().cwiseMax(0.0).cwiseSqrt();
  return fit;
}

FitResult lm_fit(const DesignMatrix& x, std::span<const double> y, const QuantileSpec& spec,
                 const LmConfig& cfg) {
  return lm_fit(x, y, spec, default_init(x, y, spec), cfg);
}

Vcov vcov_of(const Eigen::MatrixXd& score_rows) {
  const Eigen::MatrixXd info = score_rows.transpose() * score_rows;
  Vcov out;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
  const double tiny = 1e-12 * std::max(1.0, info.diagonal().maxCoeff());
  const bool regular = ldlt.info() == Eigen::Success && ldlt.isPositive() &&
                       ldlt.vectorD().minCoeff() > tiny;
  if (regular) {
    out.matrix = ldlt.solve(Eigen::MatrixXd::Identity(info.rows(), info.cols()));
  } else {
    out.singular = true;
    out.matrix = info.completeOrthogonalDecomposition().pseudoInverse();
  }
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose()).eval();
  return out;
}

double predict_quantile(const Eigen::VectorXd& beta, const Eigen::VectorXd& x,
                        const QuantileSpec& spec, std::optional<double> u_target) {
  if (beta.size() != x.size()) {
    throw DomainError("covariate row length does not match beta");
  }
  const double phi = x.dot(beta);
  if (!u_target) return link_inverse(spec.link(), phi);
  const double c = compute_c(*u_target);
  return std::exp(theta_from_phi(spec, phi) * std::log(c));
}

std::vector<double> fitted_cdf(const Eigen::VectorXd& beta, const DesignMatrix& x,
                               std::span<const double> y, const QuantileSpec& spec) {
  check_shapes(beta, x, y);
  const Eigen::VectorXd phi = x.matrix() * beta;
  std::vector<double> f(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    f[i] = cdf_log_theta(y[i], log_theta_from_phi(spec, phi[static_cast<Eigen::Index>(i)]));
  }
  return f;
}

std::vector<QuantileChange> quantile_change_series(std::span<const double> fitted) {
  if (fitted.size() < 2) throw DomainError("change series needs at least two fitted values");
  std::vector<QuantileChange> out;
  out.reserve(fitted.size() - 1);
  for (std::size_t i = 1; i < fitted.size(); ++i) {
    QuantileChange change;
    change.absolute = fitted[i] - fitted[i - 1];
    if (fitted[i - 1] != 0.0) change.relative = change.absolute / fitted[i - 1];
    out.push_back(change);
  }
  return out;
}

}  // namespace mbur

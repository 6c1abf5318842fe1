#ifndef MBUR_QUANTREG_HPP_
#define MBUR_QUANTREG_HPP_

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mbur/quantile_link.hpp"

namespace mbur {

/// Regression design with a leading intercept column of ones.
class DesignMatrix {
 public:
  /// Builds [1 | covariates]. covariate_names labels the non-intercept
  /// columns. Requires rows >= columns + 1 (strictly more observations than
  /// coefficients).
  DesignMatrix(const Eigen::MatrixXd& covariates, std::vector<std::string> covariate_names);

  /// Intercept-only design with n rows.
  static DesignMatrix intercept_only(Eigen::Index n);

  Eigen::Index rows() const noexcept { return x_.rows(); }
  Eigen::Index cols() const noexcept { return x_.cols(); }
  const Eigen::MatrixXd& matrix() const noexcept { return x_; }
  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  struct Prebuilt {};
  DesignMatrix(Prebuilt, Eigen::MatrixXd x, std::vector<std::string> names);

  Eigen::MatrixXd x_;
  std::vector<std::string> names_;
};

struct LmConfig {
  double lambda0 = 1e-3;
  double lambda_up = 10.0;
  double lambda_down = 0.1;
  int max_iter = 500;
  double grad_tol = 1e-8;
  double step_tol = 1e-12;
};

enum class StopReason { Gradient, Step, MaxIter, Stalled, InfeasibleStart };

std::string_view to_string(StopReason reason) noexcept;

struct LmIteration {
  int iteration = 0;
  double neg_loglik = 0.0;
  double lambda = 0.0;
  double grad_norm = 0.0;
  bool accepted = false;
};

struct FitResult {
  QuantileSpec spec{0.5, Link::Logit};
  Eigen::VectorXd beta;
  double loglik = 0.0;
  Eigen::MatrixXd vcov;
  Eigen::VectorXd se;
  bool vcov_singular = false;
  bool converged = false;
  StopReason stop = StopReason::MaxIter;
  int iterations = 0;
  double lambda_final = 0.0;
  double grad_norm = 0.0;
  std::vector<LmIteration> trace;
};

/// -sum_i log f(y_i; theta_i) with theta_i = theta_from_phi(spec, x_i' beta).
/// Throws DomainError on bad y or mismatched sizes. May return +inf when
/// the likelihood underflows; callers treat that as an infeasible point.
double neg_loglik(const Eigen::VectorXd& beta, const DesignMatrix& x, std::span<const double> y,
                  const QuantileSpec& spec);

/// Per-observation score rows: entry (i, j) is d l_i / d beta_j, where l_i
/// is the log-likelihood contribution of observation i. Column sums are
/// the gradient of the log-likelihood.
Eigen::MatrixXd score(const Eigen::VectorXd& beta, const DesignMatrix& x,
                      std::span<const double> y, const QuantileSpec& spec);

/// Intercept equal to the link of the empirical u-quantile of y, slopes 0.
/// Falls back to zeros when that quantile is degenerate.
Eigen::VectorXd default_init(const DesignMatrix& x, std::span<const double> y,
                             const QuantileSpec& spec);

/// Damped outer-product (Levenberg-Marquardt) maximum-likelihood fit.
///
/// With G = score(beta) and g its column sums, each trial step solves
/// (G'G + lambda I) delta = g. A trial is accepted if it strictly lowers
/// neg_loglik, or if the change is within rounding noise of the objective
/// and the score max-norm drops. On acceptance lambda is multiplied by
/// lambda_down, otherwise by lambda_up and the step is retried. The fit stops when max|g| falls below
/// grad_tol * n, an accepted step is shorter than step_tol (relative), the
/// iteration budget runs out, or lambda exceeds 1e16.
///
/// Non-convergence is reported through FitResult::converged, never thrown.
FitResult lm_fit(const DesignMatrix& x, std::span<const double> y, const QuantileSpec& spec,
                 const Eigen::VectorXd& init, const LmConfig& cfg = {});

/// lm_fit from default_init.
FitResult lm_fit(const DesignMatrix& x, std::span<const double> y, const QuantileSpec& spec,
                 const LmConfig& cfg = {});

struct Vcov {
  Eigen::MatrixXd matrix;
  bool singular = false;
};

/// (G'G)^-1 at the estimate, symmetrised. Falls back to the pseudo-inverse
/// and sets `singular` when G'G is rank deficient.
Vcov vcov_of(const Eigen::MatrixXd& score_rows);

/// Fitted conditional quantile at covariate row x (intercept included).
/// Without u_target: link_inverse(x' beta), the quantile at the model's own
/// level. With u_target: c(u_target)^theta(x).
double predict_quantile(const Eigen::VectorXd& beta, const Eigen::VectorXd& x,
                        const QuantileSpec& spec, std::optional<double> u_target = std::nullopt);

/// Fitted F(y_i; theta_i) for every observation.
std::vector<double> fitted_cdf(const Eigen::VectorXd& beta, const DesignMatrix& x,
                               std::span<const double> y, const QuantileSpec& spec);

struct QuantileChange {
  double absolute = 0.0;
  /// Empty when the predecessor is zero.
  std::optional<double> relative;
};

/// Consecutive changes of a series of fitted quantiles already ordered by
/// the predictor. Element i - 1 compares entries i and i - 1.
std::vector<QuantileChange> quantile_change_series(std::span<const double> fitted);

}  // namespace mbur

#endif  // MBUR_QUANTREG_HPP_

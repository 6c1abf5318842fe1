#include "report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <cstdlib>

namespace mbur::cli {

Json num(double v) {
  if (!std::isfinite(v)) return nullptr;
  const auto text = fmt::format("{:.10g}", v);
  return std::strtod(text.c_str(), nullptr);
}

Json num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

Json nums(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json pairs(const std::vector<std::pair<double, double>>& v) {
  Json a = Json::array();
  for (const auto& [first, second] : v) a.push_back(Json::array({num(first), num(second)}));
  return a;
}

Json matrix(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Description& d) {
  return Json{{"mean", num(d.mean)},         {"sd", num(d.sd)},
              {"skewness", num(d.skewness)}, {"kurtosis", num(d.kurtosis)},
              {"min", num(d.min)},           {"q1", num(d.q1)},
              {"q2", num(d.q2)},             {"q3", num(d.q3)},
              {"max", num(d.max)}};
}

Json to_json(const DistFit& fit) {
  return Json{{"alpha", num(fit.param.alpha())},   {"theta", num(fit.param.theta())},
              {"loglik", num(fit.loglik)},         {"se_alpha", num(fit.se_alpha)},
              {"var_alpha", num(fit.var_alpha)},   {"iterations", fit.iterations},
              {"converged", fit.converged}};
}

Json to_json(const KsResult& ks) {
  return Json{{"statistic", num(ks.statistic)},
              {"p_value", num(ks.p_value)},
              {"method", "stephens_asymptotic"}};
}

Json to_json(const InfoCriteria& ic) {
  return Json{{"aic", num(ic.aic)}, {"caic", num(ic.caic)}, {"bic", num(ic.bic)},
              {"hqic", num(ic.hqic)}};
}

Json to_json(const FitResult& fit, const DesignMatrix& x) {
  Json coefs = Json::array();
  for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
    coefs.push_back(Json{{"name", x.names()[static_cast<std::size_t>(j)]},
                         {"estimate", num(fit.beta[j])},
                         {"se", num(fit.se[j])}});
  }
  return Json{{"quantile", num(fit.spec.u())},
              {"link", std::string(to_string(fit.spec.link()))},
              {"c", num(fit.spec.c())},
              {"coefficients", std::move(coefs)},
              {"loglik", num(fit.loglik)},
              {"vcov", matrix(fit.vcov)},
              {"vcov_singular", fit.vcov_singular},
              {"converged", fit.converged},
              {"stop_reason", std::string(to_string(fit.stop))},
              {"iterations", fit.iterations},
              {"lambda_final", num(fit.lambda_final)},
              {"grad_norm", num(fit.grad_norm)}};
}

Json to_json(const DiagnosticsReport& rep, bool include_residuals) {
  Json j{{"ks_rq", to_json(rep.ks_rq)},
         {"ks_cs", to_json(rep.ks_cs)},
         {"criteria", to_json(rep.criteria)},
         {"r2m", num(rep.r2m)},
         {"qq_rq", pairs(rep.qq_rq)},
         {"qq_cs", pairs(rep.qq_cs)}};
  if (include_residuals) {
    j["rq"] = nums(rep.rq);
    j["cs"] = nums(rep.cs);
  }
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace mbur::cli

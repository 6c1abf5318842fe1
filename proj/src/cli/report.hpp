#ifndef MBUR_SRC_CLI_REPORT_HPP_
#define MBUR_SRC_CLI_REPORT_HPP_

#include <nlohmann/json.hpp>

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbur/dataio.hpp"
#include "mbur/diagnostics.hpp"
#include "mbur/distribution.hpp"
#include "mbur/quantreg.hpp"

namespace mbur::cli {

using Json = nlohmann::ordered_json;

/// Number rounded to 10 significant digits; null when not finite.
Json num(double v);
Json num(const std::optional<double>& v);
Json nums(std::span<const double> v);
Json pairs(const std::vector<std::pair<double, double>>& v);
Json matrix(const Eigen::MatrixXd& m);

Json to_json(const Description& d);
Json to_json(const DistFit& fit);
Json to_json(const KsResult& ks);
Json to_json(const InfoCriteria& ic);
Json to_json(const FitResult& fit, const DesignMatrix& x);
Json to_json(const DiagnosticsReport& rep, bool include_residuals);

/// Stable text form: two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace mbur::cli

#endif  // MBUR_SRC_CLI_REPORT_HPP_

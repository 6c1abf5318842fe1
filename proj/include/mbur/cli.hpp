#ifndef MBUR_CLI_HPP_
#define MBUR_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace mbur::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNoConvergence = 3;

/// Runs one command line (without the program name). Reports go to `out`
/// unless --out is given; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mbur::cli

#endif  // MBUR_CLI_HPP_

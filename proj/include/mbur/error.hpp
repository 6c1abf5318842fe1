#ifndef MBUR_ERROR_HPP_
#define MBUR_ERROR_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace mbur {

/// An argument lies outside the mathematical domain of an operation
/// (y outside (0,1), a quantile level outside its accepted range, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed or unusable input data. Carries the 1-based data row when the
/// problem can be pinned to one.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what, std::optional<std::size_t> row = std::nullopt)
      : std::runtime_error(what), row_(row) {}

  std::optional<std::size_t> row() const noexcept { return row_; }

 private:
  std::optional<std::size_t> row_;
};

}  // namespace mbur

#endif  // MBUR_ERROR_HPP_

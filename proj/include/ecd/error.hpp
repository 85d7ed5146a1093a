#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecd {

/// Raised when input data violates a contract (bad record, empty dataset,
/// non-SPD covariance, malformed file). Parameter misuse uses
/// std::invalid_argument instead.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}

  /// Row-tagged error for file loaders; rows are 1-based and count the header.
  DataError(std::size_t row, const std::string& reason)
      : std::runtime_error("row " + std::to_string(row) + ": " + reason),
        row_(row),
        reason_(reason) {}

  /// 0 when the error is not tied to a file row.
  std::size_t row() const noexcept { return row_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t row_ = 0;
  std::string reason_;
};

}  // namespace ecd

#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace invgauss {

/// Column-oriented numeric table. Columns keep file order; all have length rows().
class DataTable {
 public:
  DataTable() = default;

  void add_column(std::string name, std::vector<double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  bool has(std::string_view name) const noexcept;
  /// Throws header_mismatch naming the column when absent.
  std::span<const double> column(std::string_view name) const;

  friend bool operator==(const DataTable&, const DataTable&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::size_t rows_ = 0;
};

/// Required CCPP columns and the closed alias table (case-insensitive; AT -> T).
struct CcppSchema {
  std::vector<std::string> required{"T", "V", "AP", "RH", "PE"};
  std::vector<std::pair<std::string, std::string>> aliases{{"AT", "T"}};

  /// Canonical name for a header cell, or the trimmed cell itself when unknown.
  std::string resolve(std::string_view header) const;
};

/// Comma-delimited, header row, '.' decimal separator. Blank cells raise
/// missing_value with (row, column); unparsable cells raise parse_error.
DataTable load_csv(const std::filesystem::path& path, const CcppSchema& schema = {});
DataTable parse_csv(std::string_view text, const CcppSchema& schema = {});

struct RangeBound {
  std::string column;
  double min;
  double max;
};

/// Published min-max envelope of the CCPP sample.
const std::vector<RangeBound>& ccpp_envelope();

struct RangeViolation {
  std::string column;
  std::size_t row;
  double value;
  double bound;
  bool above;  ///< value exceeds the upper bound (otherwise below the lower)
};

std::vector<RangeViolation> validate_ranges(const DataTable& table,
                                            const std::vector<RangeBound>& envelope = ccpp_envelope());

struct OutlierReport {
  std::vector<double> squared_distances;  ///< one per row
  std::vector<std::size_t> flagged;       ///< rows above the threshold
  double threshold;                        ///< chi-square(d) quantile at 1 - threshold_p
};

/// Squared Mahalanobis distances against the column means and the (n - 1)
/// sample covariance; throws singular_covariance for a rank-deficient covariance.
OutlierReport mahalanobis_outliers(const DataTable& table, const std::vector<std::string>& columns, double threshold_p);
OutlierReport mahalanobis_outliers(const Eigen::MatrixXd& data, double threshold_p);

}  // namespace invgauss

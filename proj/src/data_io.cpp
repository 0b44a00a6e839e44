#include "invgauss/data_io.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "invgauss/error.hpp"
#include "invgauss/special.hpp"

namespace invgauss {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

}  // namespace

void DataTable::add_column(std::string name, std::vector<double> values) {
  if (!names_.empty() && values.size() != rows_)
    raise(Errc::dimension_mismatch, "column " + name + " has " + std::to_string(values.size()) + " rows, expected " +
                                        std::to_string(rows_));
  if (has(name)) raise(Errc::header_mismatch, "duplicate column " + name);
  rows_ = values.size();
  names_.push_back(std::move(name));
  columns_.push_back(std::move(values));
}

bool DataTable::has(std::string_view name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

std::span<const double> DataTable::column(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) raise(Errc::header_mismatch, "unknown column '" + std::string(name) + "'");
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

std::string CcppSchema::resolve(std::string_view header) const {
  const std::string key = upper(trim(header));
  for (const auto& [alias, canonical] : aliases)
    if (key == upper(alias)) return canonical;
  for (const auto& name : required)
    if (key == upper(name)) return name;
  return std::string(trim(header));
}

DataTable parse_csv(std::string_view text, const CcppSchema& schema) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) raise(Errc::header_mismatch, "CSV is empty; a header row is required");

  std::vector<std::string> header;
  for (auto cell : split(lines.front())) header.push_back(schema.resolve(cell));

  std::string missing;
  for (const auto& name : schema.required) {
    if (std::find(header.begin(), header.end(), name) == header.end()) missing += (missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) raise(Errc::header_mismatch, "required columns not found: " + missing);

  std::vector<std::vector<double>> columns(header.size());
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    for (std::size_t c = 0; c < header.size(); ++c) {
      const std::string where = "row " + std::to_string(r) + ", column " + header[c];
      if (c >= cells.size() || cells[c].empty()) raise(Errc::missing_value, "missing value at " + where);
      std::string_view cell = cells[c];
      if (cell.front() == '+') cell.remove_prefix(1);
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size())
        raise(Errc::parse_error, "cannot parse '" + std::string(cells[c]) + "' at " + where);
      columns[c].push_back(value);
    }
    if (cells.size() > header.size())
      raise(Errc::parse_error, "row " + std::to_string(r) + " has more cells than the header");
  }

  DataTable table;
  for (std::size_t c = 0; c < header.size(); ++c) table.add_column(header[c], std::move(columns[c]));
  return table;
}

DataTable load_csv(const std::filesystem::path& path, const CcppSchema& schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::file_not_found, "cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_csv(buffer.str(), schema);
}

const std::vector<RangeBound>& ccpp_envelope() {
  static const std::vector<RangeBound> envelope{
      {"T", 1.81, 37.11},
      {"V", 25.36, 81.56},
      {"AP", 992.89, 1033.30},
      {"RH", 25.56, 100.16},
      {"PE", 420.26, 495.76},
  };
  return envelope;
}

std::vector<RangeViolation> validate_ranges(const DataTable& table, const std::vector<RangeBound>& envelope) {
  std::vector<RangeViolation> out;
  for (const auto& bound : envelope) {
    if (!table.has(bound.column)) continue;
    const auto values = table.column(bound.column);
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] < bound.min) out.push_back({bound.column, i, values[i], bound.min, false});
      else if (values[i] > bound.max) out.push_back({bound.column, i, values[i], bound.max, true});
    }
  }
  return out;
}

OutlierReport mahalanobis_outliers(const Eigen::MatrixXd& data, double threshold_p) {
  if (!(threshold_p > 0.0 && threshold_p < 1.0)) raise(Errc::domain, "threshold_p must lie in (0, 1)");
  const Eigen::Index n = data.rows();
  const Eigen::Index d = data.cols();
  if (d < 1 || n <= d) raise(Errc::singular_covariance, "need more rows than columns for a covariance estimate");

  const Eigen::RowVectorXd mean = data.colwise().mean();
  const Eigen::MatrixXd centered = data.rowwise() - mean;
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);

  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov, Eigen::EigenvaluesOnly);
  const double largest = eig.eigenvalues().maxCoeff();
  if (!(largest > 0.0) || eig.eigenvalues().minCoeff() <= 1e-12 * largest)
    raise(Errc::singular_covariance, "sample covariance is singular");

  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  // Solve L v = centered_i; squared distance is |v|^2.
  const Eigen::MatrixXd v = llt.matrixL().solve(centered.transpose());

  OutlierReport report{{}, {}, special::chi_square_quantile(1.0 - threshold_p, static_cast<double>(d))};
  report.squared_distances.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d2 = v.col(i).squaredNorm();
    report.squared_distances[static_cast<std::size_t>(i)] = d2;
    if (d2 > report.threshold) report.flagged.push_back(static_cast<std::size_t>(i));
  }
  return report;
}

OutlierReport mahalanobis_outliers(const DataTable& table, const std::vector<std::string>& columns, double threshold_p) {
  Eigen::MatrixXd data(static_cast<Eigen::Index>(table.rows()), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const auto col = table.column(columns[j]);
    for (std::size_t i = 0; i < col.size(); ++i) data(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
  }
  return mahalanobis_outliers(data, threshold_p);
}

}  // namespace invgauss

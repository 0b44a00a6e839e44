#include "invgauss/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "invgauss/error.hpp"
#include "invgauss/parallel.hpp"
#include "invgauss/rng.hpp"
#include "invgauss/special.hpp"

namespace invgauss {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// As error_metrics, but a constant target yields r2 = NaN instead of throwing
// (single-observation test folds).
ErrorMetrics metrics_or_nan(std::span<const double> y, std::span<const double> yhat) {
  const double n = static_cast<double>(y.size());
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double ss_res = 0.0;
  double abs_sum = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double e = y[i] - yhat[i];
    ss_res += e * e;
    abs_sum += std::fabs(e);
    ss_tot += (y[i] - mean) * (y[i] - mean);
  }
  const double r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : std::numeric_limits<double>::quiet_NaN();
  return {ss_res / n, abs_sum / n, r2};
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<std::size_t>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

Eigen::VectorXd take(const Eigen::VectorXd& y, const std::vector<std::size_t>& rows) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) out[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
  return out;
}

std::span<const double> view(const Eigen::VectorXd& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

}  // namespace

ErrorMetrics error_metrics(std::span<const double> y, std::span<const double> yhat) {
  if (y.empty() || y.size() != yhat.size())
    raise(Errc::dimension_mismatch, "error_metrics: y and yhat must have equal nonzero lengths");
  const ErrorMetrics m = metrics_or_nan(y, yhat);
  if (std::isnan(m.r2)) raise(Errc::zero_variance_target, "error_metrics: target has zero variance, r2 undefined");
  return m;
}

std::vector<std::size_t> fold_assignment(std::size_t n, const CvConfig& config) {
  if (config.folds < 2 || config.folds > n)
    raise(Errc::fold_too_small, "need 2 <= folds <= n (folds=" + std::to_string(config.folds) + ", n=" + std::to_string(n) + ")");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (config.shuffle) {
    Rng rng(config.seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t pos = 0; pos < n; ++pos) assignment[order[pos]] = pos % config.folds;
  return assignment;
}

CvReport k_fold_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GlmSpec& spec, const CvConfig& config) {
  const auto n = static_cast<std::size_t>(y.size());
  if (static_cast<std::size_t>(X.rows()) != n) raise(Errc::dimension_mismatch, "design and response row counts differ");
  const std::vector<std::size_t> assignment = fold_assignment(n, config);
  const auto p = static_cast<std::size_t>(X.cols());

  std::vector<FoldResult> folds(config.folds);
  parallel_for(config.folds, [&](std::size_t k) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t i = 0; i < n; ++i) (assignment[i] == k ? test : train).push_back(i);
    if (train.size() <= p)
      raise(Errc::fold_too_small, "training fold " + std::to_string(k) + " has " + std::to_string(train.size()) +
                                      " rows for " + std::to_string(p) + " coefficients");

    const Eigen::MatrixXd x_train = take_rows(X, train);
    const Eigen::VectorXd y_train = take(y, train);
    const Eigen::MatrixXd x_test = take_rows(X, test);
    const Eigen::VectorXd y_test = take(y, test);

    const GlmFit fit = irls_fit(x_train, y_train, spec);
    const Eigen::VectorXd train_hat = predict(fit, x_train).mean;
    const Eigen::VectorXd test_hat = predict(fit, x_test).mean;
    folds[k] = FoldResult{k, train.size(), test.size(), metrics_or_nan(view(y_train), view(train_hat)),
                          metrics_or_nan(view(y_test), view(test_hat))};
  });

  CvReport report{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, std::move(folds), assignment};
  const double k = static_cast<double>(config.folds);
  for (const auto& f : report.folds) {
    report.train.mse += f.train.mse / k;
    report.train.mae += f.train.mae / k;
    report.train.r2 += f.train.r2 / k;
    report.test.mse += f.test.mse / k;
    report.test.mae += f.test.mae / k;
    report.test.r2 += f.test.r2 / k;
  }
  return report;
}

CorrelationRow correlation_row(std::span<const double> x, std::span<const double> y, std::string label) {
  if (x.size() != y.size()) raise(Errc::dimension_mismatch, "correlation: columns differ in length");
  const std::size_t n = x.size();
  if (n < 3) raise(Errc::empty_sample, "correlation: need at least 3 rows");
  const double nn = static_cast<double>(n);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nn;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / nn;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) raise(Errc::constant_column, "correlation: constant column in pair " + label);

  double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (1.0 - std::fabs(r) < 1e-14) r = r > 0.0 ? 1.0 : -1.0;

  CorrelationRow row{std::move(label), r, 0.0, 0.0, r, r, n};
  const double df = nn - 2.0;
  if (std::fabs(r) == 1.0) {
    row.t_statistic = r * inf;
    row.p_value = 0.0;
    return row;
  }
  row.t_statistic = r * std::sqrt(df) / std::sqrt(1.0 - r * r);
  row.p_value = special::student_t_two_sided(row.t_statistic, df);
  if (n > 3) {
    const double z = std::atanh(r);
    const double half = special::normal_quantile(0.975) / std::sqrt(nn - 3.0);
    row.ci_low = std::tanh(z - half);
    row.ci_high = std::tanh(z + half);
  } else {
    row.ci_low = -1.0;
    row.ci_high = 1.0;
  }
  return row;
}

std::vector<CorrelationRow> correlation_report(const DataTable& table, const std::string& target,
                                               std::vector<std::string> predictors) {
  const auto y = table.column(target);
  if (predictors.empty())
    for (const auto& name : table.names())
      if (name != target) predictors.push_back(name);
  std::vector<CorrelationRow> rows;
  for (const auto& name : predictors) rows.push_back(correlation_row(table.column(name), y, name + "-" + target));
  return rows;
}

std::vector<QqPoint> qq_points(std::span<const double> residuals) {
  std::vector<double> sorted(residuals.begin(), residuals.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<QqPoint> out(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    out[i] = {special::normal_quantile((static_cast<double>(i) + 0.5) / n), sorted[i]};
  return out;
}

DiagnosticBundle diagnostic_bundle(const GlmFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::VectorXd mu = predict(fit, X).mean;
  const Eigen::VectorXd pearson = residuals(fit, X, y, ResidualKind::pearson);
  const Eigen::VectorXd anscombe = residuals(fit, X, y, ResidualKind::anscombe);
  const Eigen::VectorXd h = hat_values(fit, X);
  const Eigen::VectorXd cooks = cooks_distance(fit, X, y);

  DiagnosticBundle b;
  const auto n = static_cast<std::size_t>(y.size());
  b.fitted.assign(mu.data(), mu.data() + n);
  b.pearson.assign(pearson.data(), pearson.data() + n);
  b.cooks.assign(cooks.data(), cooks.data() + n);
  b.standardized_pearson.resize(n);
  b.scale_location.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.standardized_pearson[i] = pearson[static_cast<Eigen::Index>(i)] / std::sqrt(1.0 - h[static_cast<Eigen::Index>(i)]);
    b.scale_location[i] = std::sqrt(std::fabs(b.standardized_pearson[i]));
  }
  b.qq_anscombe = qq_points(view(anscombe));
  return b;
}

DensityOverlay density_overlay(std::span<const double> sample, const DistributionComparison& comparison,
                               std::size_t bins, std::size_t grid_points) {
  if (sample.empty()) raise(Errc::empty_sample, "density_overlay: empty sample");
  if (bins < 1 || grid_points < 2) raise(Errc::invalid_parameter, "density_overlay: need bins >= 1 and grid_points >= 2");
  const auto [min_it, max_it] = std::minmax_element(sample.begin(), sample.end());
  double lo = *min_it;
  double hi = *max_it;
  const double grid_lo = lo;
  const double grid_hi = hi;
  if (hi == lo) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(bins);

  DensityOverlay out;
  out.bin_edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) out.bin_edges[k] = lo + width * static_cast<double>(k);
  out.bin_edges.back() = hi;

  std::vector<std::size_t> counts(bins, 0);
  for (double x : sample) {
    auto k = static_cast<std::size_t>((x - lo) / width);
    ++counts[std::min(k, bins - 1)];
  }
  const double n = static_cast<double>(sample.size());
  out.density.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) out.density[k] = static_cast<double>(counts[k]) / (n * width);

  out.grid.resize(grid_points);
  for (std::size_t i = 0; i < grid_points; ++i)
    out.grid[i] = grid_lo + (grid_hi - grid_lo) * static_cast<double>(i) / static_cast<double>(grid_points - 1);
  out.grid.back() = grid_hi;

  for (const auto& row : comparison.rows) {
    DensityCurve curve{row.distribution.family(), {}};
    curve.density.reserve(grid_points);
    for (double x : out.grid) curve.density.push_back(row.distribution.pdf(x));
    out.curves.push_back(std::move(curve));
  }
  return out;
}

}  // namespace invgauss

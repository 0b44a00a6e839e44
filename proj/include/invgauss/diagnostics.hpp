#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "invgauss/data_io.hpp"
#include "invgauss/glm.hpp"
#include "invgauss/inference.hpp"

namespace invgauss {

// ---------------------------------------------------------------------------
// Cross-validation
// ---------------------------------------------------------------------------

struct CvConfig {
  std::size_t folds = 5;
  std::uint64_t seed = 0;
  bool shuffle = true;
};

struct ErrorMetrics {
  double mse;
  double mae;
  double r2;
};

/// r2 = 1 - SS_res / SS_tot with SS_tot centred on mean(y); throws
/// zero_variance_target when y is constant.
ErrorMetrics error_metrics(std::span<const double> y, std::span<const double> yhat);

struct FoldResult {
  std::size_t fold;
  std::size_t train_size;
  std::size_t test_size;
  ErrorMetrics train;
  ErrorMetrics test;
};

struct CvReport {
  ErrorMetrics train;  ///< unweighted mean over folds
  ErrorMetrics test;
  std::vector<FoldResult> folds;
  std::vector<std::size_t> assignment;  ///< fold index of every observation
};

/// Shuffle 0..n-1 with Rng(seed) (Fisher-Yates, when enabled), then deal the
/// shuffled positions round-robin into k folds.
std::vector<std::size_t> fold_assignment(std::size_t n, const CvConfig& config);

CvReport k_fold_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GlmSpec& spec, const CvConfig& config);

// ---------------------------------------------------------------------------
// Correlation table
// ---------------------------------------------------------------------------

struct CorrelationRow {
  std::string label;  ///< "<predictor>-<target>"
  double r;
  double t_statistic;  ///< +/-infinity when |r| == 1
  double p_value;
  double ci_low;
  double ci_high;
  std::size_t n;
};

CorrelationRow correlation_row(std::span<const double> x, std::span<const double> y, std::string label);

/// One row per predictor (default: every other column in table order).
std::vector<CorrelationRow> correlation_report(const DataTable& table, const std::string& target,
                                               std::vector<std::string> predictors = {});

// ---------------------------------------------------------------------------
// Plot data
// ---------------------------------------------------------------------------

struct QqPoint {
  double theoretical;
  double sample;
};

/// Sorted residuals paired with standard normal quantiles at (i - 0.5)/n.
std::vector<QqPoint> qq_points(std::span<const double> residuals);

struct DiagnosticBundle {
  std::vector<double> fitted;
  std::vector<double> pearson;                ///< residual-vs-fitted panel
  std::vector<double> standardized_pearson;   ///< pearson / sqrt(1 - h)
  std::vector<double> scale_location;         ///< sqrt(|standardized pearson|)
  std::vector<double> cooks;                  ///< against observation index
  std::vector<QqPoint> qq_anscombe;
  double reference_band = 2.0;                ///< +/- band for standardized residuals
};

DiagnosticBundle diagnostic_bundle(const GlmFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct DensityCurve {
  Family family;
  std::vector<double> density;
};

struct DensityOverlay {
  std::vector<double> bin_edges;  ///< bins + 1 edges over [min, max]
  std::vector<double> density;    ///< count / (n * width); areas sum to 1
  std::vector<double> grid;       ///< equally spaced evaluation points over [min, max]
  std::vector<DensityCurve> curves;
};

DensityOverlay density_overlay(std::span<const double> sample, const DistributionComparison& comparison,
                               std::size_t bins = 50, std::size_t grid_points = 200);

}  // namespace invgauss

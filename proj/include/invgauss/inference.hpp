#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "invgauss/ig.hpp"

namespace invgauss {

// ---------------------------------------------------------------------------
// Maximum likelihood for i.i.d. inverse Gaussian samples
// ---------------------------------------------------------------------------

struct MleFit {
  IgParams params;
  std::size_t n;
  double loglik;
  Eigen::Matrix2d cov;  ///< asymptotic covariance of (mu_hat, lambda_hat): I(theta_hat)^{-1} / n
  double se_mu;
  double se_lambda;
};

double log_likelihood(std::span<const double> sample, const IgParams& p);

/// Closed-form MLE: mu = mean, lambda = n / sum(1/x_i - 1/mean).
/// Throws empty_sample (n < 2), non_positive_value, degenerate_sample.
MleFit fit_mle(std::span<const double> sample);

/// (n - c) / sum(1/x_i - 1/mean). c = 3 gives the exactly unbiased estimator
/// since lambda * sum(1/x_i - 1/mean) ~ chi-square(n - 1).
double bias_corrected_lambda(std::span<const double> sample, unsigned c = 3);

/// Per-observation expected information for (mu, lambda): diag(lambda/mu^3, 1/(2 lambda^2)).
Eigen::Matrix2d fisher_information(const IgParams& p) noexcept;

/// Score vector (d/dmu, d/dlambda) of log f(x; mu, lambda).
Eigen::Vector2d score(double x, const IgParams& p);

struct Interval {
  double lower;
  double upper;
  bool truncated;  ///< lower endpoint was clipped at zero
};

struct ParameterIntervals {
  double level;
  Interval mu;
  Interval lambda;
};

/// Wald intervals estimate +/- z_{(1+level)/2} * se.
ParameterIntervals confidence_intervals(const MleFit& fit, double level);
Interval wald_interval(double estimate, double se, double level);

struct TestResult {
  double statistic;
  double p_value;
};

/// (theta_hat - theta_0)' cov^{-1} (theta_hat - theta_0), referred to chi-square(2).
TestResult wald_test(const MleFit& fit, const IgParams& null);
/// 2 (loglik(theta_hat) - loglik(theta_0)), referred to chi-square(2).
TestResult likelihood_ratio_test(std::span<const double> sample, const IgParams& null);

// ---------------------------------------------------------------------------
// Goodness of fit and competitor distributions
// ---------------------------------------------------------------------------

enum class KsMethod { asymptotic_naive, parametric_bootstrap };

struct KsResult {
  double statistic;
  double p_value;
  KsMethod method;
};

std::string_view ks_method_name(KsMethod m) noexcept;

/// Supremum distance between the sample ECDF and `cdf`; p-value from the
/// Kolmogorov limit law evaluated at sqrt(n) * D.
KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf);
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf);

enum class Family { ig, normal, exponential };
std::string_view family_name(Family f) noexcept;

/// zero_shift: the two-/one-parameter laws with support starting at 0 (normal
/// is unaffected). location_shift: an extra location parameter is estimated
/// jointly (exponential: loc = min; IG: profile likelihood over loc < min).
enum class FitConvention { zero_shift, location_shift };
std::string_view convention_name(FitConvention c) noexcept;

class FittedDistribution {
 public:
  static FittedDistribution ig(const IgParams& p, double location = 0.0, bool location_estimated = false);
  static FittedDistribution normal(double mean, double sd);
  static FittedDistribution exponential(double rate, double location = 0.0, bool location_estimated = false);

  Family family() const noexcept { return family_; }
  double location() const noexcept { return location_; }
  bool has_location() const noexcept { return has_location_; }

  double cdf(double x) const;
  double pdf(double x) const;
  double log_pdf(double x) const;
  std::size_t parameter_count() const noexcept;
  /// Named parameter values, e.g. {("mu", ..), ("lambda", ..), ("loc", ..)}.
  std::vector<std::pair<std::string_view, double>> parameters() const;
  std::vector<double> draw(std::size_t n, std::uint64_t seed) const;

 private:
  FittedDistribution(Family f, double a, double b, double location, bool has_location)
      : family_(f), a_(a), b_(b), location_(location), has_location_(has_location) {}

  Family family_;
  double a_;  // ig: mu, normal: mean, exponential: rate
  double b_;  // ig: lambda, normal: sd
  double location_;
  bool has_location_;
};

FittedDistribution fit_family(Family family, std::span<const double> sample, FitConvention convention);

/// Parametric bootstrap p-value: (1 + #{D* >= D}) / (replicates + 1), each
/// replicate re-fitting the family to a sample drawn from the fitted law.
/// Replicate r uses seed derive_seed(seed, r).
KsResult ks_bootstrap(std::span<const double> sample, Family family, FitConvention convention,
                      std::size_t replicates, std::uint64_t seed);

struct ComparisonRow {
  FittedDistribution distribution;
  KsResult ks;
  double loglik;
  double aic;
};

struct DistributionComparison {
  FitConvention convention;
  std::vector<ComparisonRow> rows;  ///< ig, normal, exponential in that order
};

struct ComparisonOptions {
  FitConvention convention = FitConvention::zero_shift;
  KsMethod ks_method = KsMethod::asymptotic_naive;
  std::size_t bootstrap_replicates = 999;
  std::uint64_t seed = 0;
};

/// Requires n >= 8 (empty_sample otherwise).
DistributionComparison compare_distributions(std::span<const double> sample, const ComparisonOptions& options = {});

}  // namespace invgauss

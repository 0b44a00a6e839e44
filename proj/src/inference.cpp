#include "invgauss/inference.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "invgauss/error.hpp"
#include "invgauss/parallel.hpp"
#include "invgauss/rng.hpp"
#include "invgauss/special.hpp"

namespace invgauss {

namespace {

constexpr double neg_inf = -std::numeric_limits<double>::infinity();

void validate_sample(std::span<const double> sample, std::size_t min_n) {
  if (sample.size() < min_n)
    raise(Errc::empty_sample, "sample needs at least " + std::to_string(min_n) + " values, got " +
                                  std::to_string(sample.size()));
  for (std::size_t i = 0; i < sample.size(); ++i) {
    if (!(sample[i] > 0.0) || !std::isfinite(sample[i]))
      raise(Errc::non_positive_value, "sample value at index " + std::to_string(i) + " is not a positive finite number");
  }
}

double mean_of(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); }

// sum(1/x_i - 1/mean); throws degenerate_sample under the scale-aware zero.
double reciprocal_spread(std::span<const double> sample, double mean) {
  double spread = 0.0;
  for (double x : sample) spread += 1.0 / x - 1.0 / mean;
  const double n = static_cast<double>(sample.size());
  if (!(spread >= 1e-12 * n / mean))
    raise(Errc::degenerate_sample, "sample has (numerically) no spread in 1/x; lambda estimate diverges");
  return spread;
}

}  // namespace

double log_likelihood(std::span<const double> sample, const IgParams& p) {
  double total = 0.0;
  for (double x : sample) total += log_pdf(x, p);
  return total;
}

MleFit fit_mle(std::span<const double> sample) {
  validate_sample(sample, 2);
  const double n = static_cast<double>(sample.size());
  const double mu = mean_of(sample);
  const double lambda = n / reciprocal_spread(sample, mu);
  const IgParams params(mu, lambda);

  const Eigen::Matrix2d cov = fisher_information(params).inverse() / n;
  return MleFit{params, sample.size(), log_likelihood(sample, params), cov, std::sqrt(cov(0, 0)), std::sqrt(cov(1, 1))};
}

double bias_corrected_lambda(std::span<const double> sample, unsigned c) {
  validate_sample(sample, 2);
  if (c >= sample.size())
    raise(Errc::invalid_correction, "correction c=" + std::to_string(c) + " must be below n=" + std::to_string(sample.size()));
  const double mu = mean_of(sample);
  return (static_cast<double>(sample.size()) - c) / reciprocal_spread(sample, mu);
}

Eigen::Matrix2d fisher_information(const IgParams& p) noexcept {
  const double mu = p.mu();
  const double lambda = p.lambda();
  Eigen::Matrix2d info;
  info << lambda / (mu * mu * mu), 0.0, 0.0, 1.0 / (2.0 * lambda * lambda);
  return info;
}

Eigen::Vector2d score(double x, const IgParams& p) {
  if (!(x > 0.0)) raise(Errc::domain, "score: x must be positive");
  const double mu = p.mu();
  const double lambda = p.lambda();
  const double d = x - mu;
  return {lambda * d / (mu * mu * mu), 0.5 / lambda - d * d / (2.0 * mu * mu * x)};
}

Interval wald_interval(double estimate, double se, double level) {
  if (!(level > 0.0 && level < 1.0)) raise(Errc::domain, "confidence level must lie in (0, 1)");
  const double half = special::normal_quantile(0.5 * (1.0 + level)) * se;
  Interval iv{estimate - half, estimate + half, false};
  if (iv.lower < 0.0) {
    iv.lower = 0.0;
    iv.truncated = true;
  }
  return iv;
}

ParameterIntervals confidence_intervals(const MleFit& fit, double level) {
  return {level, wald_interval(fit.params.mu(), fit.se_mu, level),
          wald_interval(fit.params.lambda(), fit.se_lambda, level)};
}

TestResult wald_test(const MleFit& fit, const IgParams& null) {
  const Eigen::LLT<Eigen::Matrix2d> llt(fit.cov);
  if (llt.info() != Eigen::Success || !(fit.cov.determinant() > 0.0))
    raise(Errc::singular_covariance, "wald_test: covariance matrix is not positive definite");
  const Eigen::Vector2d delta(fit.params.mu() - null.mu(), fit.params.lambda() - null.lambda());
  const double statistic = delta.dot(llt.solve(delta));
  return {statistic, special::chi_square_sf(statistic, 2.0)};
}

TestResult likelihood_ratio_test(std::span<const double> sample, const IgParams& null) {
  const MleFit fit = fit_mle(sample);
  const double statistic = std::max(0.0, 2.0 * (fit.loglik - log_likelihood(sample, null)));
  return {statistic, special::chi_square_sf(statistic, 2.0)};
}

// ---------------------------------------------------------------------------

std::string_view ks_method_name(KsMethod m) noexcept {
  return m == KsMethod::asymptotic_naive ? "asymptotic-naive" : "parametric-bootstrap";
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) raise(Errc::empty_sample, "ks_test: empty sample");
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

KsResult ks_test(std::span<const double> sample, const std::function<double(double)>& cdf) {
  const double d = ks_statistic(sample, cdf);
  return {d, special::kolmogorov_sf(std::sqrt(static_cast<double>(sample.size())) * d), KsMethod::asymptotic_naive};
}

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::ig: return "ig";
    case Family::normal: return "normal";
    case Family::exponential: return "exponential";
  }
  return "unknown";
}

std::string_view convention_name(FitConvention c) noexcept {
  return c == FitConvention::zero_shift ? "zero-shift" : "location-shift";
}

FittedDistribution FittedDistribution::ig(const IgParams& p, double location, bool location_estimated) {
  return {Family::ig, p.mu(), p.lambda(), location, location_estimated};
}

FittedDistribution FittedDistribution::normal(double mean, double sd) {
  if (!(sd > 0.0)) raise(Errc::invalid_parameter, "normal: sd must be positive");
  return {Family::normal, mean, sd, 0.0, false};
}

FittedDistribution FittedDistribution::exponential(double rate, double location, bool location_estimated) {
  if (!(rate > 0.0)) raise(Errc::invalid_parameter, "exponential: rate must be positive");
  return {Family::exponential, rate, 0.0, location, location_estimated};
}

double FittedDistribution::cdf(double x) const {
  switch (family_) {
    case Family::ig: return x <= location_ ? 0.0 : invgauss::cdf(x - location_, IgParams(a_, b_));
    case Family::normal: return special::normal_cdf((x - a_) / b_);
    case Family::exponential: return x <= location_ ? 0.0 : -std::expm1(-a_ * (x - location_));
  }
  return 0.0;
}

double FittedDistribution::log_pdf(double x) const {
  switch (family_) {
    case Family::ig: return x <= location_ ? neg_inf : invgauss::log_pdf(x - location_, IgParams(a_, b_));
    case Family::normal: {
      const double z = (x - a_) / b_;
      return -0.5 * z * z - std::log(b_) - 0.918938533204672741780329736406;
    }
    case Family::exponential: return x < location_ ? neg_inf : std::log(a_) - a_ * (x - location_);
  }
  return neg_inf;
}

double FittedDistribution::pdf(double x) const { return std::exp(log_pdf(x)); }

std::size_t FittedDistribution::parameter_count() const noexcept {
  const std::size_t base = family_ == Family::exponential ? 1 : 2;
  return base + (has_location_ ? 1 : 0);
}

std::vector<std::pair<std::string_view, double>> FittedDistribution::parameters() const {
  std::vector<std::pair<std::string_view, double>> out;
  switch (family_) {
    case Family::ig: out = {{"mu", a_}, {"lambda", b_}}; break;
    case Family::normal: out = {{"mean", a_}, {"sd", b_}}; break;
    case Family::exponential: out = {{"rate", a_}}; break;
  }
  if (family_ != Family::normal) out.emplace_back("loc", location_);
  return out;
}

std::vector<double> FittedDistribution::draw(std::size_t n, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<double> out(n);
  switch (family_) {
    case Family::ig: {
      const IgParams p(a_, b_);
      for (auto& v : out) v = location_ + invgauss::draw(p, rng);
      break;
    }
    case Family::normal:
      for (auto& v : out) v = a_ + b_ * rng.normal();
      break;
    case Family::exponential:
      for (auto& v : out) v = location_ + rng.exponential() / a_;
      break;
  }
  return out;
}

namespace {

FittedDistribution fit_ig_with_location(std::span<const double> sample) {
  const double lo = *std::min_element(sample.begin(), sample.end());
  const double mean = mean_of(sample);
  double ss = 0.0;
  for (double x : sample) ss += (x - mean) * (x - mean);
  const double sd = std::sqrt(ss / static_cast<double>(sample.size()));
  if (!(sd > 0.0)) raise(Errc::degenerate_sample, "location-shift IG fit: sample has zero spread");

  std::vector<double> shifted(sample.size());
  // Profile log-likelihood in u = log(min - loc).
  auto profile = [&](double u) {
    const double loc = lo - std::exp(u);
    for (std::size_t i = 0; i < sample.size(); ++i) shifted[i] = sample[i] - loc;
    try {
      const double n = static_cast<double>(shifted.size());
      const double mu = mean_of(shifted);
      const IgParams p(mu, n / reciprocal_spread(shifted, mu));
      return log_likelihood(shifted, p);
    } catch (const Error&) {
      return neg_inf;
    }
  };

  const double u_lo = std::log(1e-6 * sd);
  const double u_hi = std::log(1e4 * sd);
  constexpr int grid = 240;
  const double step = (u_hi - u_lo) / grid;
  int best = 0;
  double best_value = neg_inf;
  for (int k = 0; k <= grid; ++k) {
    const double value = profile(u_lo + k * step);
    if (value > best_value) {
      best_value = value;
      best = k;
    }
  }
  if (!std::isfinite(best_value)) raise(Errc::degenerate_sample, "location-shift IG fit: profile likelihood is not finite");

  // Golden-section refinement around the best grid node.
  double a = u_lo + std::max(best - 1, 0) * step;
  double b = u_lo + std::min(best + 1, grid) * step;
  constexpr double inv_phi = 0.6180339887498949;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = profile(c);
  double fd = profile(d);
  while (b - a > 1e-10 * std::max(1.0, std::fabs(a))) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = profile(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = profile(d);
    }
  }
  double u = 0.5 * (a + b);
  if (profile(u) < best_value) u = u_lo + best * step;

  const double loc = lo - std::exp(u);
  for (std::size_t i = 0; i < sample.size(); ++i) shifted[i] = sample[i] - loc;
  const double mu = mean_of(shifted);
  const IgParams p(mu, static_cast<double>(shifted.size()) / reciprocal_spread(shifted, mu));
  return FittedDistribution::ig(p, loc, true);
}

}  // namespace

FittedDistribution fit_family(Family family, std::span<const double> sample, FitConvention convention) {
  if (sample.size() < 2) raise(Errc::empty_sample, "fit_family: need at least 2 values");
  for (double x : sample)
    if (!std::isfinite(x)) raise(Errc::non_positive_value, "fit_family: non-finite value in sample");

  switch (family) {
    case Family::ig:
      if (convention == FitConvention::location_shift) return fit_ig_with_location(sample);
      return FittedDistribution::ig(fit_mle(sample).params);
    case Family::normal: {
      const double mean = mean_of(sample);
      double ss = 0.0;
      for (double x : sample) ss += (x - mean) * (x - mean);
      const double sd = std::sqrt(ss / static_cast<double>(sample.size()));
      if (!(sd > 0.0)) raise(Errc::degenerate_sample, "normal fit: sample has zero spread");
      return FittedDistribution::normal(mean, sd);
    }
    case Family::exponential: {
      if (convention == FitConvention::location_shift) {
        const double lo = *std::min_element(sample.begin(), sample.end());
        const double scale = mean_of(sample) - lo;
        if (!(scale > 0.0)) raise(Errc::degenerate_sample, "exponential fit: sample has zero spread");
        return FittedDistribution::exponential(1.0 / scale, lo, true);
      }
      validate_sample(sample, 2);
      return FittedDistribution::exponential(1.0 / mean_of(sample));
    }
  }
  raise(Errc::invalid_parameter, "unknown family");
}

KsResult ks_bootstrap(std::span<const double> sample, Family family, FitConvention convention,
                      std::size_t replicates, std::uint64_t seed) {
  const FittedDistribution fitted = fit_family(family, sample, convention);
  auto fitted_cdf = [&](double x) { return fitted.cdf(x); };
  const double observed = ks_statistic(sample, fitted_cdf);

  std::vector<char> exceed(replicates, 0);
  parallel_for(replicates, [&](std::size_t r) {
    const std::vector<double> boot = fitted.draw(sample.size(), derive_seed(seed, r));
    try {
      const FittedDistribution refit = fit_family(family, boot, convention);
      exceed[r] = ks_statistic(boot, [&](double x) { return refit.cdf(x); }) >= observed;
    } catch (const Error&) {
      exceed[r] = 1;
    }
  });
  const double count = static_cast<double>(std::count(exceed.begin(), exceed.end(), 1));
  return {observed, (1.0 + count) / (static_cast<double>(replicates) + 1.0), KsMethod::parametric_bootstrap};
}

DistributionComparison compare_distributions(std::span<const double> sample, const ComparisonOptions& options) {
  if (sample.size() < 8) raise(Errc::empty_sample, "compare_distributions: need at least 8 values");
  validate_sample(sample, 8);

  DistributionComparison out{options.convention, {}};
  std::uint64_t family_index = 0;
  for (Family family : {Family::ig, Family::normal, Family::exponential}) {
    const FittedDistribution dist = fit_family(family, sample, options.convention);
    KsResult ks = options.ks_method == KsMethod::parametric_bootstrap
                      ? ks_bootstrap(sample, family, options.convention, options.bootstrap_replicates,
                                     derive_seed(options.seed, family_index))
                      : ks_test(sample, [&](double x) { return dist.cdf(x); });
    double loglik = 0.0;
    for (double x : sample) loglik += dist.log_pdf(x);
    const double aic = 2.0 * static_cast<double>(dist.parameter_count()) - 2.0 * loglik;
    out.rows.push_back({dist, ks, loglik, aic});
    ++family_index;
  }
  return out;
}

}  // namespace invgauss

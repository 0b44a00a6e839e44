#include <doctest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "invgauss/ig.hpp"
#include "invgauss/inference.hpp"
#include "invgauss/rng.hpp"
#include "invgauss/special.hpp"
#include "support/errc.hpp"
#include "support/oracles.hpp"

using namespace invgauss;

namespace {

double rel_err(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// log-likelihood written out from the density, independent of log_pdf
double loglik_oracle(const std::vector<double>& x, double mu, double lambda) {
  double total = 0.0;
  for (double v : x)
    total += 0.5 * std::log(lambda / (2.0 * std::numbers::pi * v * v * v)) - lambda * (v - mu) * (v - mu) / (2.0 * mu * mu * v);
  return total;
}

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * (v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - lo;
  return lo + 1 < v.size() ? v[lo] * (1 - frac) + v[lo + 1] * frac : v[lo];
}

}  // namespace

// ---------------------------------------------------------------------------
// fit_mle

TEST_CASE("fit_mle closed form on {1, 2}") {
  const std::vector<double> x{1.0, 2.0};
  const MleFit fit = fit_mle(x);
  CHECK(fit.params.mu() == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(fit.params.lambda() == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(fit.n == 2);
  CHECK(fit.loglik == doctest::Approx(loglik_oracle(x, 1.5, 12.0)).epsilon(1e-12));

  const auto best = oracle::nelder_mead(
      [&](const std::array<double, 2>& t) { return -loglik_oracle(x, std::exp(t[0]), std::exp(t[1])); }, {0.0, 0.0});
  CHECK(rel_err(std::exp(best[0]), 1.5) < 1e-6);
  CHECK(rel_err(std::exp(best[1]), 12.0) < 1e-6);
}

TEST_CASE("fit_mle covariance is the inverse information over n") {
  const auto x = sample(IgParams(2.0, 3.0), 500, 3);
  const MleFit fit = fit_mle(x);
  const double mu = fit.params.mu(), lambda = fit.params.lambda();
  CHECK(rel_err(fit.cov(0, 0), mu * mu * mu / (lambda * 500)) < 1e-12);
  CHECK(rel_err(fit.cov(1, 1), 2 * lambda * lambda / 500) < 1e-12);
  CHECK(fit.cov(0, 1) == fit.cov(1, 0));
  CHECK(Eigen::LLT<Eigen::Matrix2d>(fit.cov).info() == Eigen::Success);
  CHECK(fit.se_mu == std::sqrt(fit.cov(0, 0)));
  CHECK(fit.se_lambda == std::sqrt(fit.cov(1, 1)));
}

TEST_CASE("fit_mle errors") {
  CHECK_ERRC(fit_mle(std::vector<double>{}), Errc::empty_sample);
  CHECK_ERRC(fit_mle(std::vector<double>{1.0}), Errc::empty_sample);
  CHECK_ERRC(fit_mle(std::vector<double>{1.0, 0.0, 2.0}), Errc::non_positive_value);
  CHECK_ERRC(fit_mle(std::vector<double>{1.0, -3.0}), Errc::non_positive_value);
  for (double c : {1e-8, 0.3, 1.0, 7.0, 1e9}) CHECK_ERRC(fit_mle(std::vector<double>{c, c, c}), Errc::degenerate_sample);
}

TEST_CASE("fit_mle recovers IG(2,3) from 1e5 draws within 3 standard errors") {
  const MleFit fit = fit_mle(sample(IgParams(2.0, 3.0), 100'000, 12345));
  CHECK(std::fabs(fit.params.mu() - 2.0) < 3 * fit.se_mu);
  CHECK(std::fabs(fit.params.lambda() - 3.0) < 3 * fit.se_lambda);
}

TEST_CASE("property: fit_mle matches derivative-free maximisation") {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> u(-1.0, 1.5);
  for (int r = 0; r < 100; ++r) {
    const IgParams truth(std::exp(u(gen)), std::exp(u(gen)));
    const auto x = sample(truth, 200, 1000 + r);
    const MleFit fit = fit_mle(x);
    const auto best = oracle::nelder_mead(
        [&](const std::array<double, 2>& t) { return -loglik_oracle(x, std::exp(t[0]), std::exp(t[1])); },
        {std::log(oracle::mean(x)), 0.0});
    CHECK(rel_err(std::exp(best[0]), fit.params.mu()) < 1e-6);
    CHECK(rel_err(std::exp(best[1]), fit.params.lambda()) < 1e-6);
  }
}

// ---------------------------------------------------------------------------
// bias correction

TEST_CASE("bias_corrected_lambda") {
  const std::vector<double> x{1.0, 2.0};
  CHECK(bias_corrected_lambda(x, 0) == doctest::Approx(12.0).epsilon(1e-12));
  CHECK(bias_corrected_lambda(x, 1) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK_ERRC(bias_corrected_lambda(x, 2), Errc::invalid_correction);
  CHECK_ERRC(bias_corrected_lambda(x, 5), Errc::invalid_correction);
  CHECK_ERRC(bias_corrected_lambda(std::vector<double>{2.0, 2.0, 2.0, 2.0}, 1), Errc::degenerate_sample);
  CHECK_ERRC(bias_corrected_lambda(std::vector<double>{2.0, -2.0, 2.0, 2.0}, 1), Errc::non_positive_value);
}

TEST_CASE("property: c = 3 is unbiased and c = 0 inflates by n/(n-3)") {
  const IgParams truth(1.0, 2.0);
  double sum3 = 0.0, sum0 = 0.0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    const auto x = sample(truth, 10, derive_seed(555, r));
    sum3 += bias_corrected_lambda(x, 3);
    sum0 += bias_corrected_lambda(x, 0);
  }
  CHECK(rel_err(sum3 / reps, 2.0) < 0.02);
  CHECK(rel_err((sum0 / reps) / 2.0, 10.0 / 7.0) < 0.03);
}

// ---------------------------------------------------------------------------
// Fisher information

TEST_CASE("fisher_information diagonal entries") {
  const Eigen::Matrix2d a = fisher_information(IgParams(1.0, 2.0));
  CHECK(a(0, 0) == 2.0);
  CHECK(a(1, 1) == 0.125);
  const Eigen::Matrix2d b = fisher_information(IgParams(1.0, 1.0));
  CHECK(b(0, 0) == 1.0);
  CHECK(b(1, 1) == 0.5);
  CHECK(a(0, 1) == 0.0);
  CHECK(a(1, 0) == 0.0);
}

TEST_CASE("score has mean zero and covariance equal to the information") {
  const IgParams p(2.0, 5.0);
  const auto x = sample(p, 1'000'000, 4242);
  Eigen::Vector2d m = Eigen::Vector2d::Zero();
  Eigen::Matrix2d outer = Eigen::Matrix2d::Zero();
  for (double v : x) {
    const Eigen::Vector2d s = score(v, p);
    m += s;
    outer += s * s.transpose();
  }
  m /= static_cast<double>(x.size());
  outer /= static_cast<double>(x.size());
  const Eigen::Matrix2d info = fisher_information(p);
  CHECK(std::fabs(m(0)) < 0.01 * std::sqrt(info(0, 0)));
  CHECK(std::fabs(m(1)) < 0.01 * std::sqrt(info(1, 1)));
  CHECK(rel_err(outer(0, 0), info(0, 0)) < 0.02);
  CHECK(rel_err(outer(1, 1), info(1, 1)) < 0.02);
  const double scale = std::sqrt(info(0, 0) * info(1, 1));
  CHECK(std::fabs(outer(0, 1)) < 0.02 * scale);
  // the cross term -1/mu^2 is far outside the Monte Carlo error
  CHECK(std::fabs(outer(0, 1) - (-1.0 / 4.0)) > 0.5 * scale);
}

TEST_CASE("score matches finite differences of log_pdf") {
  const IgParams p(1.7, 0.8);
  const double h = 1e-6;
  for (double x : {0.3, 1.0, 4.0}) {
    const Eigen::Vector2d s = score(x, p);
    const double dmu = (log_pdf(x, IgParams(1.7 + h, 0.8)) - log_pdf(x, IgParams(1.7 - h, 0.8))) / (2 * h);
    const double dl = (log_pdf(x, IgParams(1.7, 0.8 + h)) - log_pdf(x, IgParams(1.7, 0.8 - h))) / (2 * h);
    CHECK(std::fabs(s(0) - dmu) < 1e-6);
    CHECK(std::fabs(s(1) - dl) < 1e-6);
  }
  CHECK_ERRC(score(0.0, p), Errc::domain);
}

// ---------------------------------------------------------------------------
// intervals and tests

TEST_CASE("wald_interval reference value") {
  const Interval i = wald_interval(10.0, 1.0, 0.95);
  CHECK(std::fabs(i.lower - 8.040036) < 1e-6);
  CHECK(std::fabs(i.upper - 11.959964) < 1e-6);
  CHECK_FALSE(i.truncated);

  const Interval t = wald_interval(1.0, 1.0, 0.95);
  CHECK(t.lower == 0.0);
  CHECK(t.truncated);
  CHECK_ERRC(wald_interval(1.0, 1.0, 1.0), Errc::domain);
  CHECK_ERRC(wald_interval(1.0, 1.0, 0.0), Errc::domain);
}

TEST_CASE("interval width grows with the level") {
  double previous = 0.0;
  for (double level : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999, 0.999999}) {
    const Interval i = wald_interval(100.0, 1.0, level);
    CHECK(i.upper - i.lower > previous);
    previous = i.upper - i.lower;
  }
}

TEST_CASE("confidence_intervals cover mu at the nominal rate") {
  int covered = 0;
  for (int r = 0; r < 1000; ++r) {
    const MleFit fit = fit_mle(sample(IgParams(1.0, 1.0), 200, derive_seed(31, r)));
    const ParameterIntervals ci = confidence_intervals(fit, 0.95);
    CHECK(ci.level == 0.95);
    if (ci.mu.lower <= 1.0 && 1.0 <= ci.mu.upper) ++covered;
  }
  CHECK(covered >= 930);
  CHECK(covered <= 970);
}

TEST_CASE("wald_test") {
  const auto x = sample(IgParams(1.0, 1.0), 300, 8);
  const MleFit fit = fit_mle(x);
  const TestResult zero = wald_test(fit, fit.params);
  CHECK(zero.statistic == 0.0);
  CHECK(zero.p_value == 1.0);

  // explicit 2x2 solve
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int r = 0; r < 20; ++r) {
    const IgParams null(u(gen), u(gen));
    const double d0 = fit.params.mu() - null.mu(), d1 = fit.params.lambda() - null.lambda();
    const double a = fit.cov(0, 0), b = fit.cov(0, 1), d = fit.cov(1, 1);
    const double det = a * d - b * b;
    const double expected = (d * d0 * d0 - 2 * b * d0 * d1 + a * d1 * d1) / det;
    const TestResult t = wald_test(fit, null);
    CHECK(rel_err(t.statistic, expected) < 1e-10);
    CHECK(std::fabs(t.p_value - std::exp(-expected / 2)) < 1e-12);  // chi-square(2) tail
  }

  MleFit broken = fit;
  broken.cov << 1.0, 1.0, 1.0, 1.0;
  CHECK_ERRC(wald_test(broken, IgParams(1.0, 1.0)), Errc::singular_covariance);
}

TEST_CASE("wald_test size at the 5% level") {
  int rejections = 0;
  for (int r = 0; r < 1000; ++r) {
    const MleFit fit = fit_mle(sample(IgParams(1.0, 1.0), 500, derive_seed(808, r)));
    if (wald_test(fit, IgParams(1.0, 1.0)).p_value < 0.05) ++rejections;
  }
  CHECK(rejections > 30);
  CHECK(rejections < 70);
}

TEST_CASE("likelihood_ratio_test") {
  const auto x = sample(IgParams(1.0, 1.0), 300, 9);
  const MleFit fit = fit_mle(x);
  const TestResult same = likelihood_ratio_test(x, fit.params);
  CHECK(std::fabs(same.statistic) < 1e-10);
  CHECK(same.p_value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK_ERRC(likelihood_ratio_test(std::vector<double>{1.0}, IgParams(1, 1)), Errc::empty_sample);

  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int r = 0; r < 100; ++r) {
    const auto s = sample(IgParams(std::exp(u(gen)), std::exp(u(gen))), 50, 4000 + r);
    const TestResult t = likelihood_ratio_test(s, IgParams(std::exp(u(gen)), std::exp(u(gen))));
    CHECK(t.statistic >= 0.0);
    CHECK(t.p_value <= 1.0);
  }
}

TEST_CASE("LRT and Wald agree near the null at n = 1e4") {
  const auto x = sample(IgParams(1.0, 1.0), 10'000, 10);
  const MleFit fit = fit_mle(x);
  // a null about three standard errors away in each coordinate
  const IgParams null(fit.params.mu() + 3 * fit.se_mu, fit.params.lambda() - 3 * fit.se_lambda);
  const double lrt = likelihood_ratio_test(x, null).statistic;
  const double wald = wald_test(fit, null).statistic;
  CHECK(lrt > 5.0);
  CHECK(std::fabs(lrt - wald) / lrt < 0.1);
}

TEST_CASE("property: LRT and Wald null distributions approach chi-square(2)") {
  std::vector<double> lrt, wald;
  for (int r = 0; r < 2000; ++r) {
    const auto x = sample(IgParams(1.0, 1.0), 400, derive_seed(2718, r));
    lrt.push_back(likelihood_ratio_test(x, IgParams(1.0, 1.0)).statistic);
    wald.push_back(wald_test(fit_mle(x), IgParams(1.0, 1.0)).statistic);
  }
  CHECK(std::fabs(percentile(lrt, 0.95) - 5.991) < 0.4);
  CHECK(std::fabs(percentile(wald, 0.95) - 5.991) < 0.4);
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

TEST_CASE("ks_test geometry") {
  const IgParams unit(1.0, 1.0);
  std::vector<double> at_quantiles;
  for (int i = 1; i <= 10; ++i) at_quantiles.push_back(quantile((i - 0.5) / 10.0, unit));
  const KsResult r = ks_test(at_quantiles, [&](double x) { return cdf(x, unit); });
  CHECK(r.statistic == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(r.method == KsMethod::asymptotic_naive);
  CHECK(r.p_value == doctest::Approx(special::kolmogorov_sf(std::sqrt(10.0) * r.statistic)).epsilon(1e-12));

  const std::vector<double> one{quantile(0.5, unit)};
  CHECK(ks_statistic(one, [&](double x) { return cdf(x, unit); }) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_ERRC(ks_test(std::vector<double>{}, [](double) { return 0.5; }), Errc::empty_sample);
  CHECK(ks_method_name(KsMethod::asymptotic_naive) == "asymptotic-naive");
  CHECK(ks_method_name(KsMethod::parametric_bootstrap) == "parametric-bootstrap");
}

TEST_CASE("ks_test agrees with a brute-force ECDF distance") {
  const IgParams p(2.0, 3.0);
  const auto x = sample(p, 777, 1);
  const auto f = [&](double v) { return cdf(v, p); };
  CHECK(std::fabs(ks_statistic(x, f) - oracle::ks_distance(x, f)) < 1e-15);
}

TEST_CASE("ks_test on true-law draws stays under the critical value") {
  const IgParams unit(1.0, 1.0);
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const KsResult r = ks_test(sample(unit, 10'000, seed), [&](double x) { return cdf(x, unit); });
    if (r.statistic < 1.63 / 100.0) ++ok;
    CHECK(r.statistic >= 0.0);
    CHECK(r.statistic <= 1.0);
    CHECK(r.p_value >= 0.0);
    CHECK(r.p_value <= 1.0);
  }
  CHECK(ok >= 9);
}

TEST_CASE("property: ks statistic invariant under x -> x^3") {
  const IgParams p(1.3, 0.7);
  const auto x = sample(p, 2000, 19);
  std::vector<double> cubed;
  for (double v : x) cubed.push_back(v * v * v);
  const double d1 = ks_statistic(x, [&](double v) { return cdf(v, p); });
  const double d2 = ks_statistic(cubed, [&](double v) { return cdf(std::cbrt(v), p); });
  CHECK(std::fabs(d1 - d2) < 1e-12);
}

TEST_CASE("kolmogorov_sf reference values") {
  // Q(s) = 2 sum (-1)^{k-1} exp(-2 k^2 s^2)
  auto series = [](double s) {
    double total = 0.0;
    for (int k = 1; k < 200; ++k) total += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * s * s);
    return total;
  };
  for (double s : {0.6, 0.8, 1.0, 1.36, 1.63, 2.5}) CHECK(std::fabs(special::kolmogorov_sf(s) - series(s)) < 1e-12);
  CHECK(std::fabs(special::kolmogorov_sf(1.358) - 0.05) < 1e-3);
  CHECK(special::kolmogorov_sf(0.0) == 1.0);
  CHECK(special::kolmogorov_sf(0.2) < 1.0);
  CHECK(special::kolmogorov_sf(0.2) > 1.0 - 1e-11);
}

// ---------------------------------------------------------------------------
// competitor families and comparison

TEST_CASE("FittedDistribution families") {
  const auto ig = FittedDistribution::ig(IgParams(2.0, 3.0));
  CHECK(ig.parameter_count() == 2);
  CHECK(ig.cdf(1.0) == cdf(1.0, IgParams(2.0, 3.0)));
  CHECK(ig.cdf(-1.0) == 0.0);
  CHECK(ig.pdf(0.0) == 0.0);
  CHECK(ig.log_pdf(-1.0) == -INFINITY);

  const auto shifted = FittedDistribution::ig(IgParams(2.0, 3.0), 5.0, true);
  CHECK(shifted.parameter_count() == 3);
  CHECK(shifted.cdf(6.0) == cdf(1.0, IgParams(2.0, 3.0)));
  CHECK(shifted.parameters().size() == 3);
  CHECK(shifted.parameters()[2].first == "loc");

  const auto nrm = FittedDistribution::normal(1.0, 2.0);
  CHECK(nrm.parameter_count() == 2);
  CHECK(nrm.cdf(1.0) == doctest::Approx(0.5));
  CHECK(nrm.pdf(1.0) == doctest::Approx(1.0 / (2.0 * std::sqrt(2 * std::numbers::pi))));
  CHECK_ERRC(FittedDistribution::normal(1.0, 0.0), Errc::invalid_parameter);

  const auto ex = FittedDistribution::exponential(2.0);
  CHECK(ex.parameter_count() == 1);
  CHECK(ex.cdf(1.0) == doctest::Approx(1.0 - std::exp(-2.0)));
  CHECK(ex.log_pdf(1.0) == doctest::Approx(std::log(2.0) - 2.0));
  CHECK(FittedDistribution::exponential(2.0, 1.0, true).parameter_count() == 2);
  CHECK_ERRC(FittedDistribution::exponential(-1.0), Errc::invalid_parameter);

  CHECK(family_name(Family::ig) == "ig");
  CHECK(convention_name(FitConvention::zero_shift) == "zero-shift");
  CHECK(convention_name(FitConvention::location_shift) == "location-shift");
}

TEST_CASE("FittedDistribution draws follow the law") {
  for (const auto& d : {FittedDistribution::ig(IgParams(1.0, 2.0), 3.0, true), FittedDistribution::normal(-1.0, 0.5),
                        FittedDistribution::exponential(3.0, 1.0, true)}) {
    const auto x = d.draw(20'000, 3);
    CHECK(x == d.draw(20'000, 3));
    CHECK(oracle::ks_distance(x, [&](double v) { return d.cdf(v); }) < 1.63 / std::sqrt(20'000.0));
  }
}

TEST_CASE("fit_family zero-shift MLEs") {
  const std::vector<double> x{1.0, 2.0, 4.0, 8.0};
  const auto nrm = fit_family(Family::normal, x, FitConvention::zero_shift);
  const double m = 3.75;
  const double sd = std::sqrt(((1 - m) * (1 - m) + (2 - m) * (2 - m) + (4 - m) * (4 - m) + (8 - m) * (8 - m)) / 4.0);
  CHECK(nrm.parameters()[0].second == doctest::Approx(m));
  CHECK(nrm.parameters()[1].second == doctest::Approx(sd));
  const auto ex = fit_family(Family::exponential, x, FitConvention::zero_shift);
  CHECK(ex.parameters()[0].second == doctest::Approx(1.0 / m));
  CHECK(ex.location() == 0.0);
  const auto ig = fit_family(Family::ig, x, FitConvention::zero_shift);
  CHECK(ig.parameters()[0].second == doctest::Approx(fit_mle(x).params.mu()));
  CHECK(ig.parameters()[1].second == doctest::Approx(fit_mle(x).params.lambda()));

  CHECK_ERRC(fit_family(Family::exponential, std::vector<double>{1.0, -1.0, 2.0}, FitConvention::zero_shift),
             Errc::non_positive_value);
  CHECK_ERRC(fit_family(Family::normal, std::vector<double>{2.0, 2.0, 2.0}, FitConvention::zero_shift),
             Errc::degenerate_sample);
}

TEST_CASE("fit_family location-shift") {
  std::vector<double> x = sample(IgParams(1.0, 2.0), 3000, 21);
  for (double& v : x) v += 5.0;
  const auto shifted = fit_family(Family::ig, x, FitConvention::location_shift);
  const auto plain = fit_family(Family::ig, x, FitConvention::zero_shift);
  CHECK(shifted.has_location());
  CHECK(shifted.location() < *std::min_element(x.begin(), x.end()));
  CHECK(std::fabs(shifted.location() - 5.0) < 0.3);
  double ll_shifted = 0.0, ll_plain = 0.0;
  for (double v : x) {
    ll_shifted += shifted.log_pdf(v);
    ll_plain += plain.log_pdf(v);
  }
  CHECK(ll_shifted >= ll_plain);

  const auto ex = fit_family(Family::exponential, x, FitConvention::location_shift);
  const double lo = *std::min_element(x.begin(), x.end());
  CHECK(ex.location() == lo);
  CHECK(ex.parameters()[0].second == doctest::Approx(1.0 / (oracle::mean(x) - lo)));
  // the location-shift convention leaves the normal fit unchanged
  const auto n1 = fit_family(Family::normal, x, FitConvention::location_shift);
  const auto n2 = fit_family(Family::normal, x, FitConvention::zero_shift);
  CHECK(n1.parameters() == n2.parameters());
}

TEST_CASE("compare_distributions rows, AIC and log-likelihood") {
  const auto x = sample(IgParams(1.0, 0.5), 5000, 99);
  const DistributionComparison c = compare_distributions(x);
  REQUIRE(c.rows.size() == 3);
  CHECK(c.rows[0].distribution.family() == Family::ig);
  CHECK(c.rows[1].distribution.family() == Family::normal);
  CHECK(c.rows[2].distribution.family() == Family::exponential);
  for (const auto& row : c.rows) {
    double ll = 0.0;
    for (double v : x) ll += row.distribution.log_pdf(v);
    CHECK(row.loglik == doctest::Approx(ll).epsilon(1e-12));
    CHECK(row.aic == doctest::Approx(2.0 * row.distribution.parameter_count() - 2.0 * row.loglik).epsilon(1e-12));
  }
  CHECK(c.rows[0].ks.statistic < c.rows[1].ks.statistic);
  CHECK(c.rows[0].ks.statistic < c.rows[2].ks.statistic);
  CHECK(c.rows[0].loglik > c.rows[1].loglik);
  CHECK(c.rows[0].loglik > c.rows[2].loglik);

  CHECK_ERRC(compare_distributions(std::vector<double>{1, 2, 3, 4, 5, 6, 7}), Errc::empty_sample);
  CHECK_ERRC(compare_distributions(std::vector<double>{1, 2, 3, 4, 5, 6, 7, -8}), Errc::non_positive_value);
}

TEST_CASE("compare_distributions prefers the normal on truncated normal data") {
  Rng rng(17);
  std::vector<double> x;
  while (x.size() < 5000) {
    const double v = 10.0 + rng.normal();
    if (v > 0.0) x.push_back(v);
  }
  const DistributionComparison c = compare_distributions(x);
  CHECK(c.rows[1].ks.statistic < c.rows[0].ks.statistic);
  CHECK(c.rows[1].ks.statistic < c.rows[2].ks.statistic);
}

TEST_CASE("parametric bootstrap p-values") {
  const auto x = sample(IgParams(1.0, 2.0), 200, 5);
  const KsResult a = ks_bootstrap(x, Family::ig, FitConvention::zero_shift, 199, 7);
  const KsResult b = ks_bootstrap(x, Family::ig, FitConvention::zero_shift, 199, 7);
  CHECK(a.method == KsMethod::parametric_bootstrap);
  CHECK(a.statistic == b.statistic);
  CHECK(a.p_value == b.p_value);
  CHECK(a.p_value > 0.01);
  // granularity (1 + k) / (R + 1)
  const double k = a.p_value * 200.0 - 1.0;
  CHECK(std::fabs(k - std::round(k)) < 1e-9);

  // exponential data rejected as IG
  const auto ex = FittedDistribution::exponential(1.0).draw(200, 3);
  CHECK(ks_bootstrap(ex, Family::ig, FitConvention::zero_shift, 199, 7).p_value < 0.05);

  ComparisonOptions opts;
  opts.ks_method = KsMethod::parametric_bootstrap;
  opts.bootstrap_replicates = 49;
  opts.seed = 1;
  const auto cmp = compare_distributions(x, opts);
  for (const auto& row : cmp.rows) CHECK(row.ks.method == KsMethod::parametric_bootstrap);
}

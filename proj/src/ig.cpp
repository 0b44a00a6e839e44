#include "invgauss/ig.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "invgauss/error.hpp"
#include "invgauss/rng.hpp"
#include "invgauss/special.hpp"

namespace invgauss {

namespace {

constexpr double log_2pi = 1.837877066409345483560659472811;

void check_support(double x, const char* who) {
  if (!(x > 0.0)) raise(Errc::domain, std::string(who) + ": x must be positive, got " + std::to_string(x));
}

// Arguments of the two Gaussian terms of the distribution function.
struct CdfTerms {
  double a;  // sqrt(lambda/x) (x/mu - 1)
  double b;  // -sqrt(lambda/x) (x/mu + 1)
  double log_reflection;  // 2 lambda/mu + log Phi(b)
};

CdfTerms cdf_terms(double x, const IgParams& p) {
  const double r = std::sqrt(p.lambda() / x);
  const double xm = x / p.mu();
  const double b = -r * (xm + 1.0);
  return {r * (xm - 1.0), b, 2.0 * p.lambda() / p.mu() + special::log_normal_cdf(b)};
}

}  // namespace

IgParams::IgParams(double mu, double lambda) : mu_(mu), lambda_(lambda) {
  if (!(mu > 0.0) || !std::isfinite(mu))
    raise(Errc::invalid_parameter, "IgParams: mu must be positive and finite, got " + std::to_string(mu));
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    raise(Errc::invalid_parameter, "IgParams: lambda must be positive and finite, got " + std::to_string(lambda));
}

double log_pdf(double x, const IgParams& p) {
  check_support(x, "log_pdf");
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  const double mu = p.mu();
  const double lambda = p.lambda();
  const double dev = (x - mu) / mu;
  return 0.5 * (std::log(lambda) - log_2pi - 3.0 * std::log(x)) - lambda * dev * dev / (2.0 * x);
}

double pdf(double x, const IgParams& p) { return std::exp(log_pdf(x, p)); }

double cdf(double x, const IgParams& p) {
  check_support(x, "cdf");
  if (std::isinf(x)) return 1.0;
  const CdfTerms t = cdf_terms(x, p);
  const double value = special::normal_cdf(t.a) + std::exp(t.log_reflection);
  return value > 1.0 ? 1.0 : value;
}

double survival(double x, const IgParams& p) {
  check_support(x, "survival");
  if (std::isinf(x)) return 0.0;
  const CdfTerms t = cdf_terms(x, p);
  const double value = special::normal_cdf(-t.a) - std::exp(t.log_reflection);
  return value < 0.0 ? 0.0 : value;
}

double quantile(double q, const IgParams& p) {
  if (!(q > 0.0 && q < 1.0)) raise(Errc::domain, "quantile: q must lie in (0, 1), got " + std::to_string(q));

  // Residual measured on whichever tail keeps full relative precision.
  const bool upper = q > 0.5;
  const double target = upper ? 1.0 - q : q;
  auto residual = [&](double x) { return upper ? target - survival(x, p) : cdf(x, p) - target; };

  // Starting point: lognormal with the same mean and variance.
  const double s2 = std::log1p(p.mu() / p.lambda());
  double x = std::exp(std::log(p.mu()) - 0.5 * s2 + std::sqrt(s2) * special::normal_quantile(q));

  double lo = x;
  double hi = x;
  while (residual(lo) > 0.0) {
    hi = lo;
    lo *= 0.5;
    if (lo < std::numeric_limits<double>::min()) return lo;
  }
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) return std::numeric_limits<double>::max();
  }

  for (int iter = 0; iter < 500; ++iter) {
    const double r = residual(x);
    if (r == 0.0) return x;
    if (r < 0.0) lo = x; else hi = x;
    const double density = pdf(x, p);
    double next = density > 0.0 ? x - r / density : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * x || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi)
      return next;
    x = next;
  }
  return x;
}

Moments moments(const IgParams& p) noexcept {
  const double mu = p.mu();
  return {mu, mu * mu * mu / p.lambda()};
}

double draw(const IgParams& p, Rng& rng) noexcept {
  const double mu = p.mu();
  const double nu = [&] {
    const double z = rng.normal();
    return z * z;
  }();
  const double mu_nu = mu * nu;
  const double half_ratio = 0.5 * mu / p.lambda();
  // Roots of the transformation multiply to mu^2. The smaller root
  //   mu + mu^2 nu/(2 lambda) - (mu/(2 lambda)) sqrt(4 mu lambda nu + mu^2 nu^2)
  // is formed as mu^2 / larger root to avoid cancellation.
  const double larger = mu + half_ratio * mu_nu + half_ratio * std::sqrt(mu_nu * (4.0 * p.lambda() + mu_nu));
  const double smaller = mu * mu / larger;
  const double u = rng.uniform();
  return (u <= mu / (mu + smaller)) ? smaller : larger;
}

std::vector<double> sample(const IgParams& p, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> out(n);
  for (auto& v : out) v = draw(p, rng);
  return out;
}

CanonicalForm to_canonical(const IgParams& p) noexcept {
  return {-p.lambda() / (2.0 * p.mu() * p.mu()), -0.5 * p.lambda()};
}

IgParams from_canonical(const CanonicalForm& c) {
  if (!(c.eta1 < 0.0) || !(c.eta2 < 0.0))
    raise(Errc::domain, "from_canonical: both natural parameters must be negative");
  const double lambda = -2.0 * c.eta2;
  return IgParams(std::sqrt(c.eta2 / c.eta1), lambda);
}

double log_partition(const CanonicalForm& c) {
  if (!(c.eta1 < 0.0) || !(c.eta2 < 0.0))
    raise(Errc::domain, "log_partition: both natural parameters must be negative");
  return -2.0 * std::sqrt(c.eta1 * c.eta2) - 0.5 * std::log(-2.0 * c.eta2);
}

}  // namespace invgauss

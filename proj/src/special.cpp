#include "invgauss/special.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>

#include "invgauss/error.hpp"

namespace invgauss::special {

namespace {
constexpr double inv_sqrt_2pi = 0.398942280401432677939946059934;
constexpr double log_sqrt_2pi = 0.918938533204672741780329736406;
}  // namespace

double normal_pdf(double z) noexcept { return inv_sqrt_2pi * std::exp(-0.5 * z * z); }

double normal_cdf(double z) noexcept { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double log_normal_cdf(double z) noexcept {
  if (std::isnan(z)) return z;
  if (z > 5.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
  if (z > -35.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  if (z == -std::numeric_limits<double>::infinity()) return z;
  // Mills-ratio expansion: Phi(z) = phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - 15/z^6 + ...)
  const double w = 1.0 / (z * z);
  const double series = 1.0 - w * (1.0 - 3.0 * w * (1.0 - 5.0 * w * (1.0 - 7.0 * w)));
  return -0.5 * z * z - log_sqrt_2pi - std::log(-z) + std::log(series);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) raise(Errc::domain, "normal_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>{}, p);
}

double chi_square_sf(double x, double df) {
  if (!(df > 0.0)) raise(Errc::domain, "chi_square_sf: df must be positive");
  if (std::isnan(x)) return x;
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(0.5 * df, 0.5 * x);
}

double chi_square_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) raise(Errc::domain, "chi_square_quantile: p must lie in (0, 1)");
  return boost::math::quantile(boost::math::chi_squared_distribution<double>{df}, p);
}

double student_t_two_sided(double t, double df) {
  if (!(df > 0.0)) raise(Errc::domain, "student_t_two_sided: df must be positive");
  if (std::isnan(t)) return t;
  if (std::isinf(t)) return 0.0;
  const boost::math::students_t_distribution<double> dist{df};
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
}

double kolmogorov_sf(double s) noexcept {
  if (s <= 0.0) return 1.0;
  if (s < 1.0) {
    // Jacobi dual form of the CDF converges fast for small s.
    const double f = -std::numbers::pi * std::numbers::pi / (8.0 * s * s);
    double cdf = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double odd = 2.0 * k - 1.0;
      cdf += std::exp(odd * odd * f);
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / s;
    return 1.0 - cdf;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * s * s);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-17) break;
  }
  const double q = 2.0 * sum;
  return q < 0.0 ? 0.0 : (q > 1.0 ? 1.0 : q);
}

}  // namespace invgauss::special

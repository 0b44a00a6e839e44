#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace invgauss {

/// Mean/shape pair of an inverse Gaussian law. Both must be strictly
/// positive and finite; the constructor throws Errc::invalid_parameter otherwise.
class IgParams {
 public:
  IgParams(double mu, double lambda);

  double mu() const noexcept { return mu_; }
  double lambda() const noexcept { return lambda_; }

  friend bool operator==(const IgParams&, const IgParams&) = default;

 private:
  double mu_;
  double lambda_;
};

struct Moments {
  double mean;
  double variance;
};

/// Natural parameters of the exponential-family form
///   f(x) = h(x) exp(eta1 * x + eta2 / x - A(eta1, eta2)),  h(x) = (2 pi x^3)^{-1/2}.
struct CanonicalForm {
  double eta1;
  double eta2;
};

double pdf(double x, const IgParams& p);
double log_pdf(double x, const IgParams& p);
double cdf(double x, const IgParams& p);
/// Upper tail 1 - cdf(x), computed without cancellation.
double survival(double x, const IgParams& p);
double quantile(double q, const IgParams& p);

Moments moments(const IgParams& p) noexcept;

/// Michael-Schucany-Haas transformation with rejection: one normal and one
/// uniform per variate, drawn from an Rng seeded with `seed`.
std::vector<double> sample(const IgParams& p, std::size_t n, std::uint64_t seed);

class Rng;
double draw(const IgParams& p, Rng& rng) noexcept;

CanonicalForm to_canonical(const IgParams& p) noexcept;
IgParams from_canonical(const CanonicalForm& c);
/// A(eta1, eta2) = -2 sqrt(eta1 eta2) - log(-2 eta2) / 2. Its gradient is (E[X], E[1/X]).
double log_partition(const CanonicalForm& c);

}  // namespace invgauss

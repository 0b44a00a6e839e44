#pragma once

// Scalar special functions shared by all modules. Tail probabilities are
// accurate to roughly 1e-12 relative over the ranges exercised here.

namespace invgauss::special {

double normal_pdf(double z) noexcept;
double normal_cdf(double z) noexcept;
/// log Phi(z), finite for every finite z (asymptotic series below z = -35).
double log_normal_cdf(double z) noexcept;
/// Phi^{-1}(p) for p in (0, 1).
double normal_quantile(double p);

/// Upper tail P[X > x] for X ~ chi-square(df).
double chi_square_sf(double x, double df);
double chi_square_quantile(double p, double df);

/// Two-sided p-value P[|T| >= |t|] for T ~ Student t(df).
double student_t_two_sided(double t, double df);

/// Kolmogorov limiting survival function Q(s) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 s^2).
double kolmogorov_sf(double s) noexcept;

}  // namespace invgauss::special

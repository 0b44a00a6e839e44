#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "invgauss/error.hpp"

namespace invgauss {

// Inverse Gaussian response GLM: y_i ~ IG(mu_i, lambda), g(mu_i) = x_i' beta,
// variance function V(mu) = mu^3 and dispersion phi = 1/lambda.

enum class Link {
  identity,         ///< eta = mu
  log,              ///< eta = log(mu)
  inverse_squared,  ///< eta = 1/mu^2 (canonical, positive-sign convention)
};

std::string_view link_name(Link link) noexcept;
std::optional<Link> parse_link(std::string_view name) noexcept;

struct GlmSpec {
  Link link = Link::identity;
  int max_iterations = 100;
  double tolerance = 1e-8;  ///< on the relative change in deviance
  bool intercept = true;    ///< used by design_matrix()
  /// Return an unconverged fit (converged == false) instead of throwing.
  bool allow_nonconvergence = false;
};

struct GlmFit {
  Link link;
  Eigen::VectorXd beta;
  double dispersion;  ///< Pearson chi-square / (n - p)
  double deviance;    ///< sum of unit deviances (y - mu)^2 / (mu^2 y)
  double lambda_mle;  ///< n / deviance, the shape MLE given the fitted means
  double loglik;      ///< IG log-likelihood at (mu_hat, lambda_mle)
  Eigen::MatrixXd vcov;
  Eigen::VectorXd fitted;  ///< final mu vector on the training rows
  int iterations;
  bool converged;
  std::vector<double> deviance_trace;  ///< deviance after each accepted step
  std::size_t n;

  std::size_t p() const noexcept { return static_cast<std::size_t>(beta.size()); }
  Eigen::VectorXd standard_errors() const { return vcov.diagonal().cwiseSqrt(); }
};

/// Thrown by irls_fit when the iteration limit is hit; carries the trace.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, std::vector<double> trace)
      : Error(Errc::non_convergence, what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const noexcept { return trace_; }

 private:
  std::vector<double> trace_;
};

/// Stacks the given predictor columns, with a leading column of ones when
/// `intercept` is set.
Eigen::MatrixXd design_matrix(const std::vector<std::span<const double>>& columns, bool intercept);

/// Fisher scoring with working weights (dmu/deta)^2 / mu^3, started from mu = y.
/// Steps that leave the mean space or raise the deviance are halved (30 times at most).
GlmFit irls_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GlmSpec& spec = {});

struct Prediction {
  Eigen::VectorXd mean;
  std::vector<std::size_t> non_positive;  ///< rows whose identity-link mean is <= 0
};

Prediction predict(const GlmFit& fit, const Eigen::MatrixXd& X);

double unit_deviance(double y, double mu);

enum class ResidualKind { pearson, anscombe, deviance };
std::string_view residual_kind_name(ResidualKind kind) noexcept;

/// pearson:  (y - mu) / (sqrt(phi) mu^{3/2})
/// anscombe: (log y - log mu) / (sqrt(phi) mu^{1/2})
/// deviance: sign(y - mu) sqrt(d(y, mu) / phi)
Eigen::VectorXd residuals(const GlmFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, ResidualKind kind);

/// Diagonal of W^{1/2} X (X'WX)^{-1} X' W^{1/2} at the fitted means.
Eigen::VectorXd hat_values(const GlmFit& fit, const Eigen::MatrixXd& X);

/// pearson_i^2 h_i / (p (1 - h_i)^2).
Eigen::VectorXd cooks_distance(const GlmFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

struct InformationCriteria {
  double aic;
  double bic;
};

/// k = p + 1 parameters (coefficients plus dispersion).
InformationCriteria information_criteria(const GlmFit& fit);
InformationCriteria information_criteria(double loglik, std::size_t k, double n);

}  // namespace invgauss

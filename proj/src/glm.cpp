#include "invgauss/glm.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace invgauss {

namespace {

constexpr double max_halvings = 30;

double link_fn(Link link, double mu) {
  switch (link) {
    case Link::identity: return mu;
    case Link::log: return std::log(mu);
    case Link::inverse_squared: return 1.0 / (mu * mu);
  }
  return mu;
}

// Returns NaN when eta is outside the link's range.
double inverse_link(Link link, double eta) {
  switch (link) {
    case Link::identity: return eta;
    case Link::log: return std::exp(eta);
    case Link::inverse_squared: return eta > 0.0 ? 1.0 / std::sqrt(eta) : std::numeric_limits<double>::quiet_NaN();
  }
  return eta;
}

double mu_eta(Link link, double mu) {
  switch (link) {
    case Link::identity: return 1.0;
    case Link::log: return mu;
    case Link::inverse_squared: return -0.5 * mu * mu * mu;
  }
  return 1.0;
}

bool valid_mean(double mu) { return mu > 0.0 && std::isfinite(mu); }

Eigen::VectorXd means_from(Link link, const Eigen::MatrixXd& X, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = X * beta;
  Eigen::VectorXd mu(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) mu[i] = inverse_link(link, eta[i]);
  return mu;
}

std::optional<double> total_deviance(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  double d = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (!valid_mean(mu[i])) return std::nullopt;
    const double r = y[i] - mu[i];
    d += r * r / (mu[i] * mu[i] * y[i]);
  }
  return d;
}

Eigen::VectorXd working_weights(Link link, const Eigen::VectorXd& mu) {
  Eigen::VectorXd w(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    const double g = mu_eta(link, mu[i]);
    w[i] = g * g / (mu[i] * mu[i] * mu[i]);
  }
  return w;
}

// (A'A)^{-1} for A = W^{1/2} X via the triangular factor of a Householder QR.
Eigen::MatrixXd weighted_gram_inverse(const Eigen::MatrixXd& X, const Eigen::VectorXd& w) {
  const Eigen::MatrixXd A = w.cwiseSqrt().asDiagonal() * X;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  const auto p = X.cols();
  const Eigen::MatrixXd R = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv = R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  return r_inv * r_inv.transpose();
}

void check_dimensions(const GlmFit& fit, const Eigen::MatrixXd& X) {
  if (X.cols() != fit.beta.size())
    raise(Errc::dimension_mismatch, "design has " + std::to_string(X.cols()) + " columns, fit has " +
                                        std::to_string(fit.beta.size()) + " coefficients");
}

void check_response(const GlmFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  check_dimensions(fit, X);
  if (X.rows() != y.size()) raise(Errc::dimension_mismatch, "design and response row counts differ");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (!(y[i] > 0.0)) raise(Errc::non_positive_response, "response at row " + std::to_string(i) + " is not positive");
}

Eigen::VectorXd positive_means(const GlmFit& fit, const Eigen::MatrixXd& X) {
  Eigen::VectorXd mu = means_from(fit.link, X, fit.beta);
  for (Eigen::Index i = 0; i < mu.size(); ++i)
    if (!valid_mean(mu[i]))
      raise(Errc::invalid_mean_during_iteration, "fitted mean at row " + std::to_string(i) + " is not positive");
  return mu;
}

}  // namespace

std::string_view link_name(Link link) noexcept {
  switch (link) {
    case Link::identity: return "identity";
    case Link::log: return "log";
    case Link::inverse_squared: return "inverse-squared";
  }
  return "unknown";
}

std::optional<Link> parse_link(std::string_view name) noexcept {
  if (name == "identity") return Link::identity;
  if (name == "log") return Link::log;
  if (name == "inverse-squared" || name == "canonical") return Link::inverse_squared;
  return std::nullopt;
}

std::string_view residual_kind_name(ResidualKind kind) noexcept {
  switch (kind) {
    case ResidualKind::pearson: return "pearson";
    case ResidualKind::anscombe: return "anscombe";
    case ResidualKind::deviance: return "deviance";
  }
  return "unknown";
}

Eigen::MatrixXd design_matrix(const std::vector<std::span<const double>>& columns, bool intercept) {
  const std::size_t n = columns.empty() ? 0 : columns.front().size();
  for (const auto& c : columns)
    if (c.size() != n) raise(Errc::dimension_mismatch, "design columns have different lengths");
  const Eigen::Index offset = intercept ? 1 : 0;
  Eigen::MatrixXd X(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(columns.size()) + offset);
  if (intercept) X.col(0).setOnes();
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j) + offset) = columns[j][i];
  return X;
}

double unit_deviance(double y, double mu) {
  if (!(y > 0.0) || !(mu > 0.0)) raise(Errc::domain, "unit_deviance: y and mu must be positive");
  const double r = y - mu;
  return r * r / (mu * mu * y);
}

GlmFit irls_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const GlmSpec& spec) {
  if (!(spec.tolerance > 0.0) || spec.max_iterations < 1)
    raise(Errc::invalid_parameter, "GlmSpec: tolerance must be positive and max_iterations >= 1");
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) raise(Errc::dimension_mismatch, "design and response row counts differ");
  if (p < 1 || n <= p)
    raise(Errc::rank_deficient_design, "need more rows than columns (n=" + std::to_string(n) + ", p=" + std::to_string(p) + ")");
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(y[i] > 0.0) || !std::isfinite(y[i]))
      raise(Errc::non_positive_response, "response at row " + std::to_string(i) + " is not a positive finite number");
  if (!X.allFinite()) raise(Errc::invalid_parameter, "design matrix has non-finite entries");

  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < p)
      raise(Errc::rank_deficient_design, "design matrix has rank " + std::to_string(qr.rank()) + " < " + std::to_string(p));
  }

  const Link link = spec.link;
  Eigen::VectorXd mu = y;
  Eigen::VectorXd beta;
  double deviance = std::numeric_limits<double>::infinity();
  std::vector<double> trace;
  bool converged = false;
  int iteration = 0;

  for (iteration = 1; iteration <= spec.max_iterations; ++iteration) {
    Eigen::VectorXd z(n);
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double g = mu_eta(link, mu[i]);
      z[i] = link_fn(link, mu[i]) + (y[i] - mu[i]) / g;
      w[i] = g * g / (mu[i] * mu[i] * mu[i]);
    }
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::VectorXd proposal = (sw.asDiagonal() * X).householderQr().solve(sw.cwiseProduct(z));

    Eigen::VectorXd candidate = proposal;
    Eigen::VectorXd candidate_mu = means_from(link, X, candidate);
    std::optional<double> candidate_dev = total_deviance(y, candidate_mu);

    if (beta.size() == 0) {
      if (!candidate_dev)
        raise(Errc::invalid_mean_during_iteration, "initial IRLS step produced a non-positive mean");
    } else {
      int halvings = 0;
      while ((!candidate_dev || *candidate_dev > deviance) && halvings < max_halvings) {
        candidate = 0.5 * (candidate + beta);
        candidate_mu = means_from(link, X, candidate);
        candidate_dev = total_deviance(y, candidate_mu);
        ++halvings;
      }
      if (!candidate_dev)
        raise(Errc::invalid_mean_during_iteration, "step-halving could not keep all fitted means positive");
      if (*candidate_dev > deviance) {
        // No descent direction left at working precision.
        converged = true;
        break;
      }
    }

    const double step = beta.size() == 0 ? std::numeric_limits<double>::infinity()
                                         : (candidate - beta).cwiseAbs().maxCoeff();
    const double change = std::fabs(deviance - *candidate_dev);
    const double previous = deviance;
    beta = candidate;
    mu = candidate_mu;
    deviance = *candidate_dev;
    trace.push_back(deviance);

    if (std::isfinite(previous) && (change < spec.tolerance * std::max(deviance, std::numeric_limits<double>::min()) || step < 1e-10)) {
      converged = true;
      break;
    }
  }
  if (iteration > spec.max_iterations) iteration = spec.max_iterations;

  if (!converged && !spec.allow_nonconvergence)
    throw NonConvergenceError("IRLS did not converge in " + std::to_string(spec.max_iterations) + " iterations", trace);

  const Eigen::VectorXd w = working_weights(link, mu);
  double pearson = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double r = y[i] - mu[i];
    pearson += r * r / (mu[i] * mu[i] * mu[i]);
  }
  const double dispersion = pearson / static_cast<double>(n - p);

  double lambda_mle = std::numeric_limits<double>::infinity();
  double loglik = std::numeric_limits<double>::infinity();
  if (deviance > 0.0) {
    lambda_mle = static_cast<double>(n) / deviance;
    constexpr double log_2pi = 1.837877066409345483560659472811;
    loglik = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dev = (y[i] - mu[i]) / mu[i];
      loglik += 0.5 * (std::log(lambda_mle) - log_2pi - 3.0 * std::log(y[i])) - lambda_mle * dev * dev / (2.0 * y[i]);
    }
  }

  return GlmFit{link,
                beta,
                dispersion,
                deviance,
                lambda_mle,
                loglik,
                dispersion * weighted_gram_inverse(X, w),
                mu,
                iteration,
                converged,
                std::move(trace),
                static_cast<std::size_t>(n)};
}

Prediction predict(const GlmFit& fit, const Eigen::MatrixXd& X) {
  check_dimensions(fit, X);
  Prediction out{means_from(fit.link, X, fit.beta), {}};
  for (Eigen::Index i = 0; i < out.mean.size(); ++i)
    if (!(out.mean[i] > 0.0)) out.non_positive.push_back(static_cast<std::size_t>(i));
  return out;
}

Eigen::VectorXd residuals(const GlmFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y, ResidualKind kind) {
  check_response(fit, X, y);
  const Eigen::VectorXd mu = positive_means(fit, X);
  const double scale = std::sqrt(fit.dispersion);
  Eigen::VectorXd r(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y[i] == mu[i]) {  // exact fit; also keeps 0/0 out when the dispersion is zero
      r[i] = 0.0;
      continue;
    }
    switch (kind) {
      case ResidualKind::pearson: r[i] = (y[i] - mu[i]) / (scale * mu[i] * std::sqrt(mu[i])); break;
      case ResidualKind::anscombe: r[i] = (std::log(y[i]) - std::log(mu[i])) / (scale * std::sqrt(mu[i])); break;
      case ResidualKind::deviance: {
        const double d = std::sqrt(unit_deviance(y[i], mu[i])) / scale;
        r[i] = y[i] > mu[i] ? d : (y[i] < mu[i] ? -d : 0.0);
        break;
      }
    }
  }
  return r;
}

Eigen::VectorXd hat_values(const GlmFit& fit, const Eigen::MatrixXd& X) {
  check_dimensions(fit, X);
  const Eigen::VectorXd mu = positive_means(fit, X);
  const Eigen::VectorXd w = working_weights(fit.link, mu);
  const Eigen::MatrixXd A = w.cwiseSqrt().asDiagonal() * X;
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), A.cols());
  return Q.rowwise().squaredNorm();
}

Eigen::VectorXd cooks_distance(const GlmFit& fit, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const Eigen::VectorXd pearson = residuals(fit, X, y, ResidualKind::pearson);
  const Eigen::VectorXd h = hat_values(fit, X);
  const double p = static_cast<double>(fit.p());
  Eigen::VectorXd d(h.size());
  for (Eigen::Index i = 0; i < h.size(); ++i) {
    const double one_minus = 1.0 - h[i];
    if (!(one_minus > 1e-12)) raise(Errc::leverage_one, "observation " + std::to_string(i) + " has leverage 1");
    d[i] = pearson[i] * pearson[i] * h[i] / (p * one_minus * one_minus);
  }
  return d;
}

InformationCriteria information_criteria(double loglik, std::size_t k, double n) {
  const double kk = static_cast<double>(k);
  return {2.0 * kk - 2.0 * loglik, kk * std::log(n) - 2.0 * loglik};
}

InformationCriteria information_criteria(const GlmFit& fit) {
  return information_criteria(fit.loglik, fit.p() + 1, static_cast<double>(fit.n));
}

}  // namespace invgauss

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "invgauss/ig.hpp"
#include "invgauss/inference.hpp"

namespace invgauss {

/// X(t) = nu t + sigma W(t), started at 0, absorbed at barrier > 0.
struct DriftParams {
  double nu;
  double sigma;
  double barrier;

  /// sigma > 0 and barrier > 0; nu may be any finite value.
  void validate() const;
};

struct FptSample {
  DriftParams params;
  std::vector<double> hits;  ///< hitting times of the paths that hit, in path order
  std::size_t censored;      ///< paths still below the barrier at max_time
  double dt;
  double max_time;
  std::size_t n_paths;
  std::uint64_t seed;
  bool bridge_correction;
};

struct SimulationOptions {
  double dt = 1e-4;
  /// Horizon; when unset, quantile(1 - 1e-6) of the implied IG law (requires nu > 0).
  std::optional<double> max_time;
  std::size_t n_paths = 10000;
  std::uint64_t seed = 0;
  bool bridge_correction = true;
};

/// Euler scheme on a grid of step dt. Path i draws from Rng(derive_seed(seed, i)),
/// so the result does not depend on thread scheduling. With the bridge
/// correction a step that ends below the barrier still counts as a hit with
/// probability exp(-2 (a - x_k)(a - x_{k+1}) / (sigma^2 dt)); hit times are
/// then drawn uniformly inside the crossing step. Without it, the hit time is
/// the end of the first step at or above the barrier.
FptSample simulate_fpt(const DriftParams& params, const SimulationOptions& options);

/// (mu, lambda) = (a / nu, a^2 / sigma^2); throws non_positive_drift for nu <= 0.
IgParams fpt_to_ig_params(const DriftParams& params);

struct MartingaleEstimate {
  double estimate;
  double std_error;
};

/// Monte Carlo mean of exp(a W(t) - a^2 t / 2), W(t) ~ N(0, t), n >= 100.
MartingaleEstimate martingale_check(double a, double t, std::size_t n, std::uint64_t seed);

/// K-S distance between the hit-time ECDF and the implied IG cdf. Throws
/// censored_sample when any path was censored and empty_sample with no hits.
KsResult empirical_vs_theoretical(const FptSample& sample);

}  // namespace invgauss

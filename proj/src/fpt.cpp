#include "invgauss/fpt.hpp"

#include <cmath>
#include <string>

#include "invgauss/error.hpp"
#include "invgauss/parallel.hpp"
#include "invgauss/rng.hpp"

namespace invgauss {

namespace {

// Hit time of one path, or a negative value when censored.
double run_path(const DriftParams& p, double dt, std::size_t steps, double max_time, bool bridge, Rng& rng) {
  const double drift = p.nu * dt;
  const double diffusion = p.sigma * std::sqrt(dt);
  const double bridge_scale = -2.0 / (p.sigma * p.sigma * dt);
  const double a = p.barrier;
  double x = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double next = x + drift + diffusion * rng.normal();
    const double t0 = static_cast<double>(k) * dt;
    const double t1 = std::min(t0 + dt, max_time);
    if (next >= a) return bridge ? t0 + (t1 - t0) * rng.uniform() : t1;
    if (bridge) {
      const double exponent = bridge_scale * (a - x) * (a - next);
      // exp(-40) is far below the resolution of any test; skip the draw.
      if (exponent > -40.0 && rng.uniform() < std::exp(exponent)) return t0 + (t1 - t0) * rng.uniform();
    }
    x = next;
  }
  return -1.0;
}

}  // namespace

void DriftParams::validate() const {
  if (!std::isfinite(nu)) raise(Errc::invalid_parameter, "drift must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) raise(Errc::invalid_parameter, "sigma must be positive");
  if (!(barrier > 0.0) || !std::isfinite(barrier)) raise(Errc::invalid_parameter, "barrier must be positive");
}

IgParams fpt_to_ig_params(const DriftParams& params) {
  params.validate();
  if (!(params.nu > 0.0)) raise(Errc::non_positive_drift, "IG identification needs a positive drift");
  return IgParams(params.barrier / params.nu, params.barrier * params.barrier / (params.sigma * params.sigma));
}

FptSample simulate_fpt(const DriftParams& params, const SimulationOptions& options) {
  params.validate();
  if (options.n_paths < 1) raise(Errc::invalid_parameter, "n_paths must be at least 1");
  double max_time = 0.0;
  if (options.max_time) {
    max_time = *options.max_time;
  } else {
    if (!(params.nu > 0.0))
      raise(Errc::invalid_step, "max_time is required when the drift is not positive");
    max_time = quantile(1.0 - 1e-6, fpt_to_ig_params(params));
  }
  if (!(options.dt > 0.0) || !std::isfinite(options.dt) || !(options.dt < max_time) || !std::isfinite(max_time))
    raise(Errc::invalid_step, "need 0 < dt < max_time (dt=" + std::to_string(options.dt) +
                                  ", max_time=" + std::to_string(max_time) + ")");

  const auto steps = static_cast<std::size_t>(std::ceil(max_time / options.dt - 1e-9));
  std::vector<double> times(options.n_paths);
  parallel_for(options.n_paths, [&](std::size_t i) {
    Rng rng(derive_seed(options.seed, i));
    times[i] = run_path(params, options.dt, steps, max_time, options.bridge_correction, rng);
  });

  FptSample out{params, {}, 0, options.dt, max_time, options.n_paths, options.seed, options.bridge_correction};
  out.hits.reserve(times.size());
  for (double t : times) {
    if (t >= 0.0) out.hits.push_back(t);
    else ++out.censored;
  }
  return out;
}

MartingaleEstimate martingale_check(double a, double t, std::size_t n, std::uint64_t seed) {
  if (n < 100) raise(Errc::invalid_parameter, "martingale_check needs n >= 100");
  if (!(t > 0.0)) raise(Errc::invalid_parameter, "martingale_check needs t > 0");
  Rng rng(seed);
  const double scale = a * std::sqrt(t);
  const double shift = -0.5 * a * a * t;
  // Welford accumulation keeps the variance exact at a = 0.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::exp(scale * rng.normal() + shift);
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double variance = m2 / static_cast<double>(n - 1);
  return {mean, std::sqrt(variance / static_cast<double>(n))};
}

KsResult empirical_vs_theoretical(const FptSample& sample) {
  if (sample.censored > 0)
    raise(Errc::censored_sample, std::to_string(sample.censored) + " censored paths; increase max_time");
  if (sample.hits.empty()) raise(Errc::empty_sample, "no hitting times");
  const IgParams p = fpt_to_ig_params(sample.params);
  return ks_test(sample.hits, [&](double x) { return cdf(x, p); });
}

}  // namespace invgauss

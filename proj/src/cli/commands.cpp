#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>

#include "invgauss/cli.hpp"
#include "invgauss/data_io.hpp"
#include "invgauss/diagnostics.hpp"
#include "invgauss/fpt.hpp"

namespace invgauss::cli {

using nlohmann::json;

namespace {

std::string timestamp_utc() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json envelope(const std::string& command, const std::optional<std::filesystem::path>& input,
              const std::vector<std::uint64_t>& seeds) {
  json env;
  env["command"] = command;
  env["schema"] = schema_id;
  env["version"] = report_version;
  env["input_digest"] = input ? json("sha256:" + sha256_file(*input)) : json(nullptr);
  env["seeds"] = seeds;
  env["timestamp"] = timestamp_utc();
  env["payload"] = nullptr;
  return env;
}

// Runs `body` and converts library errors into an error object plus exit code.
Outcome guarded(json env, const std::function<json()>& body) {
  Outcome out{ok, std::move(env)};
  try {
    out.envelope["payload"] = body();
  } catch (const NonConvergenceError& e) {
    json trace = json::array();
    for (double d : e.trace()) trace.push_back(number(d));
    out.envelope["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}, {"trace", trace}};
    out.exit_code = exit_code_for(e.code());
  } catch (const Error& e) {
    out.envelope["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    out.exit_code = exit_code_for(e.code());
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_series_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                      const std::vector<const std::vector<double>*>& series) {
  std::ofstream out(path);
  if (!out) raise(Errc::file_not_found, "cannot write '" + path.string() + "'");
  for (std::size_t j = 0; j < header.size(); ++j) out << (j ? "," : "") << header[j];
  out << '\n';
  const std::size_t rows = series.empty() ? 0 : series.front()->size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < series.size(); ++j) out << (j ? "," : "") << format_double((*series[j])[i]);
    out << '\n';
  }
}

json metrics_json(const ErrorMetrics& m) { return {{"mse", number(m.mse)}, {"mae", number(m.mae)}, {"r2", number(m.r2)}}; }

json vector_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(number(x));
  return arr;
}

struct Model {
  Eigen::MatrixXd X;
  Eigen::VectorXd y;
  std::vector<std::string> names;
};

Model assemble(const DataTable& table, const GlmOptions& options) {
  std::vector<std::span<const double>> columns;
  for (const auto& name : options.predictors) columns.push_back(table.column(name));
  const auto response = table.column(options.response);
  Model m{design_matrix(columns, options.spec.intercept),
          Eigen::Map<const Eigen::VectorXd>(response.data(), static_cast<Eigen::Index>(response.size())), {}};
  if (options.spec.intercept) m.names.emplace_back("(Intercept)");
  m.names.insert(m.names.end(), options.predictors.begin(), options.predictors.end());
  return m;
}

json model_json(const GlmOptions& options) {
  return {{"response", options.response},
          {"predictors", options.predictors},
          {"link", link_name(options.spec.link)},
          {"intercept", options.spec.intercept}};
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::degenerate_sample:
    case Errc::singular_covariance:
    case Errc::rank_deficient_design:
    case Errc::non_convergence:
    case Errc::invalid_mean_during_iteration:
    case Errc::leverage_one:
    case Errc::zero_variance_target:
    case Errc::constant_column:
    case Errc::censored_sample:
      return numerical_error;
    default:
      return input_error;
  }
}

json number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::file_not_found, "cannot open '" + path.string() + "'");
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

Outcome run_fit(const FitOptions& options, const CommonOptions& common) {
  json env;
  try {
    env = envelope("fit", options.csv, {common.seed});
  } catch (const Error& e) {
    env = envelope("fit", std::nullopt, {common.seed});
    env["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    return {exit_code_for(e.code()), env};
  }
  return guarded(std::move(env), [&] {
    const DataTable table = load_csv(options.csv);
    const auto values = table.column(options.column);
    const ComparisonOptions copts{options.convention, options.ks_method, options.bootstrap_replicates, common.seed};
    const DistributionComparison comparison = compare_distributions(values, copts);

    json rows = json::array();
    for (const auto& row : comparison.rows) {
      const Family family = row.distribution.family();
      if (std::find(options.distributions.begin(), options.distributions.end(), family) == options.distributions.end())
        continue;
      json params = json::object();
      for (const auto& [name, value] : row.distribution.parameters()) params[std::string(name)] = number(value);
      rows.push_back({{"distribution", family_name(family)},
                      {"parameters", params},
                      {"ks",
                       {{"statistic", number(row.ks.statistic)},
                        {"p_value", number(row.ks.p_value)},
                        {"method", ks_method_name(row.ks.method)}}},
                      {"loglik", number(row.loglik)},
                      {"aic", number(row.aic)}});
    }

    json payload{{"column", options.column},
                 {"n", values.size()},
                 {"convention", convention_name(options.convention)},
                 {"ks_method", ks_method_name(options.ks_method)},
                 {"rows", rows}};
    if (options.ks_method == KsMethod::parametric_bootstrap) payload["bootstrap_replicates"] = options.bootstrap_replicates;

    if (common.reference) {
      const std::vector<std::pair<Family, double>> published{
          {Family::ig, 0.2291}, {Family::normal, 0.0887}, {Family::exponential, 0.2217}};
      json ref = json::object();
      for (const auto& [family, value] : published) {
        for (const auto& row : comparison.rows)
          if (row.distribution.family() == family)
            ref[std::string(family_name(family))] = {{"published_ks", value},
                                                     {"observed_ks", number(row.ks.statistic)},
                                                     {"deviation", number(row.ks.statistic - value)}};
      }
      payload["reference"] = ref;
    }

    if (options.plots && common.plot_dir) {
      const DensityOverlay overlay = density_overlay(values, comparison, options.bins);
      std::vector<double> left(overlay.bin_edges.begin(), overlay.bin_edges.end() - 1);
      std::vector<double> right(overlay.bin_edges.begin() + 1, overlay.bin_edges.end());
      const auto hist_path = *common.plot_dir / "histogram.csv";
      write_series_csv(hist_path, {"bin_left", "bin_right", "density"}, {&left, &right, &overlay.density});
      std::vector<std::string> header{"x"};
      std::vector<const std::vector<double>*> series{&overlay.grid};
      for (const auto& curve : overlay.curves) {
        header.emplace_back(family_name(curve.family));
        series.push_back(&curve.density);
      }
      const auto curve_path = *common.plot_dir / "fitted_densities.csv";
      write_series_csv(curve_path, header, series);
      payload["plots"] = {hist_path.filename().string(), curve_path.filename().string()};
    }
    return payload;
  });
}

Outcome run_glm(const GlmOptions& options, const CommonOptions& common) {
  json env;
  try {
    env = envelope("glm", options.csv, {});
  } catch (const Error& e) {
    env = envelope("glm", std::nullopt, {});
    env["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    return {exit_code_for(e.code()), env};
  }
  return guarded(std::move(env), [&] {
    const DataTable table = load_csv(options.csv);
    const Model model = assemble(table, options);
    const GlmFit fit = irls_fit(model.X, model.y, options.spec);
    const Eigen::VectorXd se = fit.standard_errors();
    const InformationCriteria ic = information_criteria(fit);
    const Prediction fitted = predict(fit, model.X);

    json coefficients = json::array();
    for (Eigen::Index j = 0; j < fit.beta.size(); ++j)
      coefficients.push_back({{"name", model.names[static_cast<std::size_t>(j)]},
                              {"estimate", number(fit.beta[j])},
                              {"std_error", number(se[j])},
                              {"z", number(fit.beta[j] / se[j])}});
    json payload = model_json(options);
    payload["n"] = fit.n;
    payload["coefficients"] = coefficients;
    payload["dispersion"] = number(fit.dispersion);
    payload["lambda_mle"] = number(fit.lambda_mle);
    payload["deviance"] = number(fit.deviance);
    payload["loglik"] = number(fit.loglik);
    payload["aic"] = number(ic.aic);
    payload["bic"] = number(ic.bic);
    payload["iterations"] = fit.iterations;
    payload["converged"] = fit.converged;
    payload["deviance_trace"] = vector_json(fit.deviance_trace);
    payload["fitted_min"] = number(fitted.mean.minCoeff());
    payload["fitted_max"] = number(fitted.mean.maxCoeff());
    payload["non_positive_fitted"] = fitted.non_positive.size();

    if (options.diagnostics) {
      const DiagnosticBundle b = diagnostic_bundle(fit, model.X, model.y);
      std::vector<double> index(b.cooks.size());
      std::iota(index.begin(), index.end(), 0.0);
      std::vector<double> qq_x;
      std::vector<double> qq_y;
      for (const auto& q : b.qq_anscombe) {
        qq_x.push_back(q.theoretical);
        qq_y.push_back(q.sample);
      }
      const double outside = static_cast<double>(std::count_if(b.standardized_pearson.begin(), b.standardized_pearson.end(),
                                                               [&](double r) { return std::fabs(r) > b.reference_band; }));
      payload["diagnostics"] = {
          {"residuals_vs_fitted", {{"fitted", vector_json(b.fitted)}, {"pearson", vector_json(b.pearson)}}},
          {"standardized_residuals",
           {{"fitted", vector_json(b.fitted)},
            {"standardized_pearson", vector_json(b.standardized_pearson)},
            {"reference_band", {-b.reference_band, b.reference_band}},
            {"fraction_outside_band", number(outside / static_cast<double>(b.fitted.size()))}}},
          {"scale_location", {{"fitted", vector_json(b.fitted)}, {"sqrt_abs_standardized_pearson", vector_json(b.scale_location)}}},
          {"cooks_distance", {{"index", vector_json(index)}, {"cooks_distance", vector_json(b.cooks)}}},
          {"qq_anscombe", {{"theoretical_quantile", vector_json(qq_x)}, {"anscombe_residual", vector_json(qq_y)}}}};

      if (common.plot_dir) {
        const auto& dir = *common.plot_dir;
        write_series_csv(dir / "residuals_vs_fitted.csv", {"fitted", "pearson"}, {&b.fitted, &b.pearson});
        write_series_csv(dir / "standardized_residuals.csv", {"fitted", "standardized_pearson"},
                         {&b.fitted, &b.standardized_pearson});
        write_series_csv(dir / "scale_location.csv", {"fitted", "sqrt_abs_standardized_pearson"},
                         {&b.fitted, &b.scale_location});
        write_series_csv(dir / "cooks_distance.csv", {"index", "cooks_distance"}, {&index, &b.cooks});
        write_series_csv(dir / "qq_anscombe.csv", {"theoretical_quantile", "anscombe_residual"}, {&qq_x, &qq_y});
        payload["plots"] = {"residuals_vs_fitted.csv", "standardized_residuals.csv", "scale_location.csv",
                            "cooks_distance.csv", "qq_anscombe.csv"};
      }
    }
    return payload;
  });
}

Outcome run_cv(const CvOptions& options, const CommonOptions& common) {
  json env;
  try {
    env = envelope("cv", options.model.csv, {common.seed});
  } catch (const Error& e) {
    env = envelope("cv", std::nullopt, {common.seed});
    env["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    return {exit_code_for(e.code()), env};
  }
  return guarded(std::move(env), [&] {
    const DataTable table = load_csv(options.model.csv);
    const Model model = assemble(table, options.model);
    const CvReport report = k_fold_cv(model.X, model.y, options.model.spec, CvConfig{options.folds, common.seed, true});

    json per_fold = json::array();
    for (const auto& f : report.folds)
      per_fold.push_back({{"fold", f.fold},
                          {"train_size", f.train_size},
                          {"test_size", f.test_size},
                          {"train", metrics_json(f.train)},
                          {"test", metrics_json(f.test)}});
    json payload = model_json(options.model);
    payload["folds"] = options.folds;
    payload["seed"] = common.seed;
    payload["n"] = static_cast<std::size_t>(model.y.size());
    payload["aggregate"] = {{"train", metrics_json(report.train)}, {"test", metrics_json(report.test)}};
    payload["per_fold"] = per_fold;
    // Published 5-fold figures, always reported next to the observed ones.
    payload["reference"] = {
        {"published", {{"train", {{"mse", 12.34}, {"mae", 2.87}, {"r2", 0.934}}}, {"test", {{"mse", 13.21}, {"mae", 2.95}, {"r2", 0.928}}}}},
        {"deviation",
         {{"train", {{"mse", number(report.train.mse - 12.34)}, {"mae", number(report.train.mae - 2.87)}, {"r2", number(report.train.r2 - 0.934)}}},
          {"test", {{"mse", number(report.test.mse - 13.21)}, {"mae", number(report.test.mae - 2.95)}, {"r2", number(report.test.r2 - 0.928)}}}}}};
    return payload;
  });
}

Outcome run_corr(const CorrOptions& options, const CommonOptions& common) {
  json env;
  try {
    env = envelope("corr", options.csv, {});
  } catch (const Error& e) {
    env = envelope("corr", std::nullopt, {});
    env["error"] = {{"code", errc_name(e.code())}, {"message", e.what()}};
    return {exit_code_for(e.code()), env};
  }
  return guarded(std::move(env), [&] {
    const DataTable table = load_csv(options.csv);
    if (!table.has(options.target)) raise(Errc::header_mismatch, "unknown target column '" + options.target + "'");
    std::vector<std::string> predictors = options.predictors;
    if (predictors.empty()) {
      const std::vector<std::string> standard{"T", "V", "AP", "RH"};
      for (const auto& name : standard)
        if (name != options.target && table.has(name)) predictors.push_back(name);
      for (const auto& name : table.names())
        if (name != options.target && std::find(predictors.begin(), predictors.end(), name) == predictors.end() &&
            std::find(standard.begin(), standard.end(), name) == standard.end())
          predictors.push_back(name);
    }
    const std::vector<CorrelationRow> rows = correlation_report(table, options.target, predictors);

    const std::vector<std::pair<std::string, double>> published{
        {"T-PE", -0.948}, {"V-PE", -0.421}, {"AP-PE", 0.264}, {"RH-PE", 0.389}};
    json out_rows = json::array();
    for (const auto& row : rows) {
      json r{{"pair", row.label},
             {"r", number(row.r)},
             {"t_statistic", number(row.t_statistic)},
             {"p_value", number(row.p_value)},
             {"ci", {number(row.ci_low), number(row.ci_high)}}};
      if (common.reference) {
        for (const auto& [label, value] : published)
          if (label == row.label) r["reference"] = {{"published_r", value}, {"deviation", number(row.r - value)}};
      }
      out_rows.push_back(r);
    }
    return json{{"target", options.target}, {"n", table.rows()}, {"rows", out_rows}};
  });
}

Outcome run_simulate(const SimulateOptions& options, const CommonOptions& common) {
  return guarded(envelope("simulate", std::nullopt, {common.seed}), [&] {
    if (options.paths < 1) raise(Errc::invalid_parameter, "--paths must be at least 1");
    const DriftParams params{options.drift, options.sigma, options.barrier};
    const FptSample s = simulate_fpt(
        params, SimulationOptions{options.dt, options.max_time, static_cast<std::size_t>(options.paths), common.seed, options.bridge});

    json payload{{"params", {{"drift", number(options.drift)}, {"sigma", number(options.sigma)}, {"barrier", number(options.barrier)}}},
                 {"dt", number(s.dt)},
                 {"max_time", number(s.max_time)},
                 {"paths", s.n_paths},
                 {"bridge_correction", s.bridge_correction},
                 {"hits", s.hits.size()},
                 {"censored", s.censored}};
    if (!s.hits.empty()) {
      const double n = static_cast<double>(s.hits.size());
      const double mean = std::accumulate(s.hits.begin(), s.hits.end(), 0.0) / n;
      double ss = 0.0;
      for (double t : s.hits) ss += (t - mean) * (t - mean);
      payload["mean"] = number(mean);
      payload["variance"] = s.hits.size() > 1 ? number(ss / (n - 1.0)) : json(nullptr);
    } else {
      payload["mean"] = nullptr;
      payload["variance"] = nullptr;
    }
    if (options.drift > 0.0) {
      const IgParams ig = fpt_to_ig_params(params);
      const Moments m = moments(ig);
      payload["implied_ig"] = {{"mu", number(ig.mu())}, {"lambda", number(ig.lambda())},
                               {"mean", number(m.mean)}, {"variance", number(m.variance)}};
      if (s.censored == 0 && !s.hits.empty()) {
        const KsResult ks = empirical_vs_theoretical(s);
        payload["ks"] = {{"statistic", number(ks.statistic)}, {"p_value", number(ks.p_value)}, {"method", ks_method_name(ks.method)}};
      } else {
        payload["ks"] = nullptr;
        payload["ks_unavailable"] = "censored paths present";
      }
    } else {
      payload["implied_ig"] = nullptr;
      payload["ks"] = nullptr;
      payload["ks_unavailable"] = "non-positive drift";
    }

    if (options.emit_hits) {
      write_series_csv(*options.emit_hits, {"hit_time"}, {&s.hits});
      payload["hits_file"] = options.emit_hits->filename().string();
    }
    return payload;
  });
}

}  // namespace invgauss::cli

// invgauss: command-line front end for distribution fitting, the IG-GLM,
// cross-validation, correlation tables and first-passage simulation.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>

#include "invgauss/cli.hpp"

namespace {

using namespace invgauss;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char c : text) {
    if (c == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (c != ' ') {
      item.push_back(c);
    }
  }
  if (!item.empty()) out.push_back(item);
  return out;
}

int usage_error(const std::string& command, const std::string& message) {
  nlohmann::json err{{"command", command},
                     {"schema", cli::schema_id},
                     {"version", cli::report_version},
                     {"payload", nullptr},
                     {"error", {{"code", "UsageError"}, {"message", message}}}};
  std::cout << err.dump(2) << '\n';
  return cli::input_error;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Inverse Gaussian modelling toolkit"};
  app.require_subcommand(1);

  std::string out_path;
  std::uint64_t seed = 42;
  bool quiet = false;
  bool reference = false;
  std::string plot_dir;
  app.add_option("--out", out_path, "Write the JSON report to this file instead of stdout");
  app.add_option("--seed", seed, "Master seed for every stochastic step");
  app.add_flag("--quiet", quiet, "Suppress the stdout report when --out is given and all warnings");
  app.add_flag("--reference", reference, "Annotate payloads with the published reference numbers");
  app.add_option("--plot-dir", plot_dir, "Directory for plot CSVs (default: next to --out, else .)");

  // fit
  cli::FitOptions fit;
  std::string fit_dists = "ig,normal,exponential";
  std::string convention = "zero-shift";
  std::size_t bootstrap = 0;
  auto* fit_cmd = app.add_subcommand("fit", "Fit IG, normal and exponential laws and compare them by K-S");
  fit_cmd->add_option("csv", fit.csv, "Input CSV")->required();
  fit_cmd->add_option("--column", fit.column, "Column to fit");
  fit_cmd->add_option("--distributions", fit_dists, "Comma-separated subset of ig,normal,exponential");
  fit_cmd->add_option("--convention", convention, "zero-shift or location-shift")
      ->check(CLI::IsMember({"zero-shift", "location-shift"}));
  fit_cmd->add_option("--bootstrap", bootstrap, "Parametric-bootstrap K-S p-values with this many replicates");
  fit_cmd->add_flag("--plots", fit.plots, "Write histogram and fitted-density CSVs");
  fit_cmd->add_option("--bins", fit.bins, "Histogram bins");

  // glm / cv share the model flags
  cli::GlmOptions glm;
  std::string glm_predictors = "T,V,AP,RH";
  std::string glm_link = "identity";
  bool no_intercept = false;
  auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("csv", glm.csv, "Input CSV")->required();
    cmd->add_option("--response", glm.response, "Response column");
    cmd->add_option("--predictors", glm_predictors, "Comma-separated predictor columns");
    cmd->add_option("--link", glm_link, "identity, log or inverse-squared")
        ->check(CLI::IsMember({"identity", "log", "inverse-squared", "canonical"}));
    cmd->add_flag("--no-intercept", no_intercept, "Omit the intercept column");
    cmd->add_option("--max-iterations", glm.spec.max_iterations, "IRLS iteration limit");
    cmd->add_option("--tolerance", glm.spec.tolerance, "Relative deviance change for convergence");
  };
  auto* glm_cmd = app.add_subcommand("glm", "Fit the inverse Gaussian GLM");
  add_model_flags(glm_cmd);
  glm_cmd->add_flag("--diagnostics", glm.diagnostics, "Add residual diagnostics and write plot CSVs");

  cli::CvOptions cv;
  long long folds = 5;
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validation of the GLM");
  add_model_flags(cv_cmd);
  cv_cmd->add_option("--folds", folds, "Number of folds");

  cli::CorrOptions corr;
  std::string corr_predictors;
  auto* corr_cmd = app.add_subcommand("corr", "Correlation table with t-tests and Fisher-z intervals");
  corr_cmd->add_option("csv", corr.csv, "Input CSV")->required();
  corr_cmd->add_option("--target", corr.target, "Target column");
  corr_cmd->add_option("--predictors", corr_predictors, "Comma-separated predictor columns");

  cli::SimulateOptions sim;
  double max_time = 0.0;
  std::string emit_hits;
  bool no_bridge = false;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate first-passage times of drifted Brownian motion");
  sim_cmd->add_option("--drift", sim.drift, "Drift nu");
  sim_cmd->add_option("--sigma", sim.sigma, "Diffusion coefficient sigma");
  sim_cmd->add_option("--barrier", sim.barrier, "Barrier level a");
  sim_cmd->add_option("--dt", sim.dt, "Time step");
  sim_cmd->add_option("--paths", sim.paths, "Number of paths");
  auto* max_time_opt = sim_cmd->add_option("--max-time", max_time, "Simulation horizon");
  sim_cmd->add_flag("--bridge,!--no-bridge", sim.bridge, "Brownian-bridge crossing correction (default on)");
  sim_cmd->add_option("--emit-hits", emit_hits, "Write raw hitting times to this CSV");

  std::string command = "invgauss";
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    for (auto* sub : app.get_subcommands()) command = sub->get_name();
    return usage_error(command, e.what());
  }

  cli::CommonOptions common;
  common.seed = seed;
  common.reference = reference;
  if (!plot_dir.empty()) common.plot_dir = plot_dir;
  else if (!out_path.empty()) common.plot_dir = std::filesystem::path(out_path).parent_path().empty()
                                                   ? std::filesystem::path(".")
                                                   : std::filesystem::path(out_path).parent_path();
  else common.plot_dir = std::filesystem::path(".");

  const auto link = parse_link(glm_link);
  glm.spec.link = *link;
  glm.spec.intercept = !no_intercept;
  glm.predictors = split_list(glm_predictors);

  cli::Outcome outcome;
  if (*fit_cmd) {
    fit.distributions.clear();
    for (const auto& name : split_list(fit_dists)) {
      if (name == "ig") fit.distributions.push_back(Family::ig);
      else if (name == "normal") fit.distributions.push_back(Family::normal);
      else if (name == "exponential") fit.distributions.push_back(Family::exponential);
      else return usage_error("fit", "unknown distribution '" + name + "'");
    }
    fit.convention = convention == "location-shift" ? FitConvention::location_shift : FitConvention::zero_shift;
    if (bootstrap > 0) {
      fit.ks_method = KsMethod::parametric_bootstrap;
      fit.bootstrap_replicates = bootstrap;
    }
    outcome = cli::run_fit(fit, common);
  } else if (*glm_cmd) {
    outcome = cli::run_glm(glm, common);
  } else if (*cv_cmd) {
    if (folds < 0) return usage_error("cv", "--folds must be non-negative");
    cv.model = glm;
    cv.folds = static_cast<std::size_t>(folds);
    outcome = cli::run_cv(cv, common);
  } else if (*corr_cmd) {
    corr.predictors = split_list(corr_predictors);
    outcome = cli::run_corr(corr, common);
  } else if (*sim_cmd) {
    if (max_time_opt->count() > 0) sim.max_time = max_time;
    if (!emit_hits.empty()) sim.emit_hits = emit_hits;
    outcome = cli::run_simulate(sim, common);
  }

  const std::string text = outcome.envelope.dump(2) + "\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << '\n';
      return cli::input_error;
    }
    out << text;
    if (!quiet) std::cout << text;
  } else {
    std::cout << text;
  }
  if (outcome.exit_code != 0 && !quiet && outcome.envelope.contains("error"))
    std::cerr << "error: " << outcome.envelope["error"]["message"].get<std::string>() << '\n';
  return outcome.exit_code;
}

#pragma once

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "invgauss/error.hpp"
#include "invgauss/glm.hpp"
#include "invgauss/inference.hpp"

namespace invgauss::cli {

inline constexpr const char* report_version = "1.0.0";
inline constexpr const char* schema_id = "invgauss-report/1";

enum ExitCode : int { ok = 0, input_error = 2, numerical_error = 3 };

/// Exit code for a library error: 2 for input/usage problems, 3 for numerical failures.
int exit_code_for(Errc code) noexcept;

struct Outcome {
  int exit_code = ok;
  nlohmann::json envelope;
};

struct CommonOptions {
  std::uint64_t seed = 42;
  bool reference = false;  ///< annotate payloads with the published reference numbers
  std::optional<std::filesystem::path> plot_dir;
};

struct FitOptions {
  std::filesystem::path csv;
  std::string column = "PE";
  std::vector<Family> distributions{Family::ig, Family::normal, Family::exponential};
  FitConvention convention = FitConvention::zero_shift;
  KsMethod ks_method = KsMethod::asymptotic_naive;
  std::size_t bootstrap_replicates = 999;
  bool plots = false;  ///< write histogram and fitted-density CSVs
  std::size_t bins = 50;
};

struct GlmOptions {
  std::filesystem::path csv;
  std::string response = "PE";
  std::vector<std::string> predictors{"T", "V", "AP", "RH"};
  GlmSpec spec;
  bool diagnostics = false;
};

struct CvOptions {
  GlmOptions model;
  std::size_t folds = 5;
};

struct CorrOptions {
  std::filesystem::path csv;
  std::string target = "PE";
  std::vector<std::string> predictors;  ///< empty: T, V, AP, RH when present, else all other columns
};

struct SimulateOptions {
  double drift = 1.0;
  double sigma = 1.0;
  double barrier = 1.0;
  double dt = 1e-4;
  long long paths = 10000;
  std::optional<double> max_time;
  bool bridge = true;
  std::optional<std::filesystem::path> emit_hits;
};

Outcome run_fit(const FitOptions& options, const CommonOptions& common);
Outcome run_glm(const GlmOptions& options, const CommonOptions& common);
Outcome run_cv(const CvOptions& options, const CommonOptions& common);
Outcome run_corr(const CorrOptions& options, const CommonOptions& common);
Outcome run_simulate(const SimulateOptions& options, const CommonOptions& common);

/// JSON value for a double: finite values as numbers, otherwise "inf", "-inf" or "nan".
nlohmann::json number(double value);

/// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace invgauss::cli

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace invgauss {

enum class Errc {
  domain,
  invalid_parameter,
  empty_sample,
  non_positive_value,
  degenerate_sample,
  invalid_correction,
  singular_covariance,
  rank_deficient_design,
  non_positive_response,
  non_convergence,
  invalid_mean_during_iteration,
  dimension_mismatch,
  leverage_one,
  zero_variance_target,
  constant_column,
  fold_too_small,
  invalid_step,
  non_positive_drift,
  censored_sample,
  file_not_found,
  header_mismatch,
  missing_value,
  parse_error,
};

/// Stable identifier used in machine-readable error objects, e.g. "DegenerateSample".
std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace invgauss

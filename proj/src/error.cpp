#include "invgauss/error.hpp"

namespace invgauss {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::domain: return "DomainError";
    case Errc::invalid_parameter: return "InvalidParameter";
    case Errc::empty_sample: return "EmptySample";
    case Errc::non_positive_value: return "NonPositiveValue";
    case Errc::degenerate_sample: return "DegenerateSample";
    case Errc::invalid_correction: return "InvalidCorrection";
    case Errc::singular_covariance: return "SingularCovariance";
    case Errc::rank_deficient_design: return "RankDeficientDesign";
    case Errc::non_positive_response: return "NonPositiveResponse";
    case Errc::non_convergence: return "NonConvergence";
    case Errc::invalid_mean_during_iteration: return "InvalidMeanDuringIteration";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::leverage_one: return "LeverageOne";
    case Errc::zero_variance_target: return "ZeroVarianceTarget";
    case Errc::constant_column: return "ConstantColumn";
    case Errc::fold_too_small: return "FoldTooSmall";
    case Errc::invalid_step: return "InvalidStep";
    case Errc::non_positive_drift: return "NonPositiveDrift";
    case Errc::censored_sample: return "CensoredSample";
    case Errc::file_not_found: return "FileNotFound";
    case Errc::header_mismatch: return "HeaderMismatch";
    case Errc::missing_value: return "MissingValue";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

}  // namespace invgauss

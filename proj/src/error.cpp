#include "logdens/error.hpp"

namespace logdens {

std::string_view to_string(ErrorKind kind)
{
  switch (kind) {
    case ErrorKind::config:
      return "Config";
    case ErrorKind::empty_window:
      return "EmptyWindow";
    case ErrorKind::singular_system:
      return "SingularSystem";
    case ErrorKind::method_unsupported:
      return "MethodUnsupported";
    case ErrorKind::zero_density:
      return "ZeroDensity";
    case ErrorKind::zero_survivor:
      return "ZeroSurvivor";
    case ErrorKind::nonpositive_denominator:
      return "NonpositiveDenominator";
    case ErrorKind::rank_deficient:
      return "RankDeficient";
    case ErrorKind::pilot_failure:
      return "PilotFailure";
    case ErrorKind::no_convergence:
      return "NoConvergence";
    case ErrorKind::zero_curvature:
      return "ZeroCurvature";
    case ErrorKind::out_of_support:
      return "OutOfSupport";
  }
  return "Unknown";
}

} // namespace logdens

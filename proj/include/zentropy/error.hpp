#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace zentropy {

enum class errc {
  invalid_distribution,
  invalid_alpha,
  empty_counts,
  invalid_horizon,
  invalid_estimator,
  unsupported_backend,
  sampling_unsupported,
  event_not_admissible,
  empty_baseline,
  event_in_baseline,
  invalid_baseline,
  invalid_grid,
  cell_is_wall,
  invalid_policy,
  invalid_hyperparameter,
  invalid_posterior,
  zero_evidence,
  invalid_detector_config,
};

constexpr std::string_view to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_distribution: return "invalid-distribution";
    case errc::invalid_alpha: return "invalid-alpha";
    case errc::empty_counts: return "empty-counts";
    case errc::invalid_horizon: return "invalid-horizon";
    case errc::invalid_estimator: return "invalid-estimator";
    case errc::unsupported_backend: return "unsupported-backend";
    case errc::sampling_unsupported: return "sampling-unsupported";
    case errc::event_not_admissible: return "event-not-admissible";
    case errc::empty_baseline: return "empty-baseline";
    case errc::event_in_baseline: return "event-in-baseline";
    case errc::invalid_baseline: return "invalid-baseline";
    case errc::invalid_grid: return "invalid-grid";
    case errc::cell_is_wall: return "cell-is-wall";
    case errc::invalid_policy: return "invalid-policy";
    case errc::invalid_hyperparameter: return "invalid-hyperparameter";
    case errc::invalid_posterior: return "invalid-posterior";
    case errc::zero_evidence: return "zero-evidence";
    case errc::invalid_detector_config: return "invalid-detector-config";
  }
  return "unknown";
}

// Every domain-invariant violation in the library surfaces as this type.
class error : public std::runtime_error {
public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

private:
  errc code_;
};

}  // namespace zentropy

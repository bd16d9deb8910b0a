#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "zentropy/entropic_potential.hpp"
#include "zentropy/entropy.hpp"
#include "zentropy/error.hpp"

namespace zentropy {

struct DetectorConfig {
  std::size_t window = 64;
  std::size_t bins = 4;
  double range_lo = 0.0;
  double range_hi = 1.0;
  double kappa = 3.0;
  std::size_t warmup = 64;
  double smoothing = 1.0;

  void validate() const {
    if (window < 8) throw error(errc::invalid_detector_config, "window must be >= 8");
    if (bins < 1) throw error(errc::invalid_detector_config, "need at least one bin");
    if (!(range_hi > range_lo) || !std::isfinite(range_lo) || !std::isfinite(range_hi))
      throw error(errc::invalid_detector_config, "range must be finite with hi > lo");
    if (!(kappa > 0.0)) throw error(errc::invalid_detector_config, "kappa must be > 0");
    if (warmup < window) throw error(errc::invalid_detector_config, "warmup must be >= window");
    if (!(smoothing > 0.0)) throw error(errc::invalid_detector_config, "smoothing must be > 0");
  }

  // Equal-width bins over [lo, hi]; out-of-range values clamp to the edge bins.
  std::size_t bin_of(double x) const {
    const double pos = (x - range_lo) / (range_hi - range_lo) * static_cast<double>(bins);
    if (!(pos > 0.0)) return 0;
    const auto b = static_cast<std::size_t>(pos);
    return std::min(b, bins - 1);
  }
};

namespace detail {

// Entropy of the Laplace-smoothed predictive built from raw bin counts.
inline double smoothed_entropy(std::span<const std::uint64_t> counts, double smoothing) {
  std::vector<double> pseudo(counts.size());
  for (std::size_t b = 0; b < counts.size(); ++b) pseudo[b] = static_cast<double>(counts[b]) + smoothing;
  return count_entropy_bits(pseudo);
}

inline void window_stats(const std::deque<double>& recent, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (recent.empty()) return;
  for (double v : recent) mean += v;
  mean /= static_cast<double>(recent.size());
  double ss = 0.0;
  for (double v : recent) ss += (v - mean) * (v - mean);
  sd = std::sqrt(ss / static_cast<double>(recent.size()));
}

}  // namespace detail

// Sliding window of the last W binned symbols with a smoothed categorical
// predictive over the bins.
class StreamModel {
public:
  explicit StreamModel(const DetectorConfig& cfg) : cfg_(cfg), counts_(cfg.bins, 0) { cfg_.validate(); }

  Distribution predictive() const {
    std::vector<Outcome> labels;
    std::vector<double> probs;
    double total = 0.0;
    for (auto c : counts_) total += static_cast<double>(c) + cfg_.smoothing;
    for (std::size_t b = 0; b < counts_.size(); ++b) {
      labels.push_back("bin" + std::to_string(b));
      probs.push_back((static_cast<double>(counts_[b]) + cfg_.smoothing) / total);
    }
    return {std::move(labels), std::move(probs)};
  }

  // H(predictive once x has entered the window) - H(predictive now). When
  // the window is full the oldest symbol leaves as x enters. The window is
  // advanced afterwards.
  ZEstimate event_potential(double x) {
    const std::size_t b = cfg_.bin_of(x);
    const double before = detail::smoothed_entropy(counts_, cfg_.smoothing);
    advance(b);
    const double after = detail::smoothed_entropy(counts_, cfg_.smoothing);
    ZEstimate z;
    z.value = after - before;
    z.horizon = {static_cast<int>(seen_) - 1, static_cast<int>(seen_)};
    z.event = "x" + std::to_string(seen_ - 1);
    z.baseline = "null";
    return z;
  }

  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  const std::deque<std::size_t>& window() const noexcept { return window_; }
  const DetectorConfig& config() const noexcept { return cfg_; }

private:
  void advance(std::size_t b) {
    if (window_.size() == cfg_.window) {
      --counts_[window_.front()];
      window_.pop_front();
    }
    window_.push_back(b);
    ++counts_[b];
    ++seen_;
  }

  DetectorConfig cfg_;
  std::vector<std::uint64_t> counts_;
  std::deque<std::size_t> window_;
  std::size_t seen_ = 0;
};

struct EventScore {
  std::size_t index = 0;
  double value = 0.0;
  std::size_t bin = 0;
  ZEstimate z;
  bool flagged = false;
  double rolling_mean = 0.0;  // of the previous (up to W) scores
  double rolling_std = 0.0;   // population std of the same scores

  bool operator==(const EventScore&) const = default;
};

// Flags an event when its Z exceeds mean + kappa * std of the preceding W
// scores, once `warmup` events have been seen.
class Detector {
public:
  explicit Detector(const DetectorConfig& cfg) : model_(cfg) {}

  EventScore ingest(double x) {
    const auto& cfg = model_.config();
    EventScore s;
    s.index = index_++;
    s.value = x;
    s.bin = cfg.bin_of(x);
    s.z = model_.event_potential(x);
    detail::window_stats(recent_, s.rolling_mean, s.rolling_std);
    s.flagged = s.index >= cfg.warmup && s.z.value > s.rolling_mean + cfg.kappa * s.rolling_std;
    recent_.push_back(s.z.value);
    if (recent_.size() > cfg.window) recent_.pop_front();
    return s;
  }

  const StreamModel& model() const noexcept { return model_; }

private:
  StreamModel model_;
  std::deque<double> recent_;
  std::size_t index_ = 0;
};

// Batch scoring that rebuilds every window from scratch; must agree exactly
// with sequential ingest.
inline std::vector<EventScore> replay(std::span<const double> values, const DetectorConfig& cfg) {
  cfg.validate();
  const std::size_t n = values.size();
  const std::size_t w = cfg.window;
  std::vector<std::size_t> bins(n);
  for (std::size_t i = 0; i < n; ++i) bins[i] = cfg.bin_of(values[i]);

  auto window_counts = [&](std::size_t end) {  // symbols [end - W, end)
    std::vector<std::uint64_t> c(cfg.bins, 0);
    for (std::size_t j = end > w ? end - w : 0; j < end; ++j) ++c[bins[j]];
    return c;
  };

  std::vector<EventScore> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    EventScore& s = out[i];
    s.index = i;
    s.value = values[i];
    s.bin = bins[i];
    s.z.value = detail::smoothed_entropy(window_counts(i + 1), cfg.smoothing) -
                detail::smoothed_entropy(window_counts(i), cfg.smoothing);
    s.z.horizon = {static_cast<int>(i), static_cast<int>(i) + 1};
    s.z.event = "x" + std::to_string(i);
    s.z.baseline = "null";
    std::deque<double> recent;
    for (std::size_t j = i > w ? i - w : 0; j < i; ++j) recent.push_back(out[j].z.value);
    detail::window_stats(recent, s.rolling_mean, s.rolling_std);
    s.flagged = i >= cfg.warmup && s.z.value > s.rolling_mean + cfg.kappa * s.rolling_std;
  }
  return out;
}

}  // namespace zentropy

#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <ranges>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "zentropy/error.hpp"

namespace zentropy {

using Outcome = std::string;

inline constexpr double kNormalizationTolerance = 1e-9;

// Shannon entropy in bits of a probability vector; 0 log 0 = 0.
template <std::ranges::input_range R>
double entropy_bits(const R& probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

// Shannon entropy in bits of a count vector, computed as log2 N - sum(c log2 c)/N.
template <std::ranges::input_range R>
double count_entropy_bits(const R& counts) {
  double total = 0.0;
  double acc = 0.0;
  for (auto c : counts) {
    const auto x = static_cast<double>(c);
    if (x > 0.0) {
      total += x;
      acc += x * std::log2(x);
    }
  }
  if (total <= 0.0) return 0.0;
  const double h = std::log2(total) - acc / total;
  return h > 0.0 ? h : 0.0;
}

// Finite probability vector over unique, ordered outcome labels.
class Distribution {
public:
  Distribution(std::vector<Outcome> outcomes, std::vector<double> probs)
      : outcomes_(std::move(outcomes)), probs_(std::move(probs)) {
    if (outcomes_.empty()) throw error(errc::invalid_distribution, "empty support");
    if (outcomes_.size() != probs_.size())
      throw error(errc::invalid_distribution, "outcome/probability length mismatch");
    double sum = 0.0;
    for (double p : probs_) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw error(errc::invalid_distribution, "negative or non-finite probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kNormalizationTolerance)
      throw error(errc::invalid_distribution, "probabilities sum to " + std::to_string(sum));
    for (double& p : probs_) p /= sum;
    std::unordered_set<std::string_view> seen;
    for (const auto& o : outcomes_) {
      if (!seen.insert(o).second) throw error(errc::invalid_distribution, "duplicate outcome '" + o + "'");
    }
  }

  static Distribution uniform(std::vector<Outcome> outcomes) {
    const auto n = outcomes.size();
    return {std::move(outcomes), std::vector<double>(n, n ? 1.0 / static_cast<double>(n) : 0.0)};
  }

  static Distribution point_mass(Outcome outcome) { return {{std::move(outcome)}, {1.0}}; }

  const std::vector<Outcome>& outcomes() const noexcept { return outcomes_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }

  // Probability of a label, 0 when absent.
  double prob(const Outcome& o) const {
    for (std::size_t i = 0; i < outcomes_.size(); ++i)
      if (outcomes_[i] == o) return probs_[i];
    return 0.0;
  }

  std::size_t support_size() const noexcept {
    std::size_t k = 0;
    for (double p : probs_) k += p > 0.0;
    return k;
  }

  bool operator==(const Distribution&) const = default;

private:
  std::vector<Outcome> outcomes_;
  std::vector<double> probs_;
};

// Empirical occurrence counts keyed by outcome label.
struct SampleCounts {
  std::map<Outcome, std::uint64_t> counts;

  void add(const Outcome& o, std::uint64_t n = 1) { counts[o] += n; }

  std::uint64_t total() const noexcept {
    std::uint64_t t = 0;
    for (const auto& [_, c] : counts) t += c;
    return t;
  }

  // Number of labels observed at least once.
  std::size_t observed() const noexcept {
    std::size_t k = 0;
    for (const auto& [_, c] : counts) k += c > 0;
    return k;
  }
};

inline double shannon_entropy(const Distribution& d) { return entropy_bits(d.probs()); }

inline double renyi_entropy(const Distribution& d, double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0 || !std::isfinite(alpha))
    throw error(errc::invalid_alpha, "alpha must be positive, finite and != 1");
  double s = 0.0;
  for (double p : d.probs()) {
    if (p > 0.0) s += std::pow(p, alpha);
  }
  const double h = std::log2(s) / (1.0 - alpha);
  return h > 0.0 ? h : 0.0;
}

inline double plugin_entropy(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  for (auto c : counts) total += c;
  if (total == 0) throw error(errc::empty_counts, "no samples");
  return count_entropy_bits(counts);
}

inline double plugin_entropy(const SampleCounts& c) {
  std::vector<std::uint64_t> v;
  v.reserve(c.counts.size());
  for (const auto& [_, n] : c.counts) v.push_back(n);
  return plugin_entropy(v);
}

// Plug-in estimate plus the (K - 1) / (2 N ln 2) first-order bias correction.
// The corrected value is reported as is, even when it exceeds log2 K.
inline double miller_madow_entropy(const SampleCounts& c) {
  const double plugin = plugin_entropy(c);
  const auto k = static_cast<double>(c.observed());
  const auto n = static_cast<double>(c.total());
  return plugin + (k - 1.0) / (2.0 * n * std::numbers::ln2);
}

// Product distribution; pair labels are "a,b".
inline Distribution joint_product(const Distribution& a, const Distribution& b) {
  std::vector<Outcome> outcomes;
  std::vector<double> probs;
  outcomes.reserve(a.size() * b.size());
  probs.reserve(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      outcomes.push_back(a.outcomes()[i] + "," + b.outcomes()[j]);
      probs.push_back(a.probs()[i] * b.probs()[j]);
    }
  }
  return {std::move(outcomes), std::move(probs)};
}

}  // namespace zentropy

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "zentropy/entropy.hpp"
#include "zentropy/error.hpp"
#include "zentropy/random.hpp"

namespace zentropy {

struct Event {
  std::string id;
  std::string description;

  bool operator==(const Event&) const = default;
};

// Event considered at t0, entropy evaluated at t > t0.
struct Horizon {
  int t0 = 0;
  int t = 1;

  int steps() const noexcept { return t - t0; }
  void validate() const {
    if (t <= t0) throw error(errc::invalid_horizon, "horizon requires t > t0");
  }
  bool operator==(const Horizon&) const = default;
};

// What "the event did not occur" means.
class Baseline {
public:
  enum class Kind { null_event, uniform_alternatives, weighted_alternatives };

  static Baseline null_event() { return Baseline(Kind::null_event, {}, {}); }

  static Baseline uniform(std::vector<Event> alternatives) {
    if (alternatives.empty()) throw error(errc::empty_baseline, "uniform baseline needs an alternative");
    const auto n = alternatives.size();
    return Baseline(Kind::uniform_alternatives, std::move(alternatives),
                    std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  static Baseline weighted(std::vector<Event> alternatives, std::vector<double> weights) {
    if (alternatives.empty()) throw error(errc::empty_baseline, "weighted baseline needs an alternative");
    std::vector<Outcome> ids;
    for (const auto& e : alternatives) ids.push_back(e.id);
    try {
      Distribution d(std::move(ids), std::move(weights));
      return Baseline(Kind::weighted_alternatives, std::move(alternatives), d.probs());
    } catch (const error& e) {
      throw error(errc::invalid_baseline, e.what());
    }
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<Event>& alternatives() const noexcept { return alternatives_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  // Short human-readable form, e.g. "uniform{left,up}".
  std::string summary() const {
    if (kind_ == Kind::null_event) return "null";
    std::string s = kind_ == Kind::uniform_alternatives ? "uniform{" : "weighted{";
    for (std::size_t i = 0; i < alternatives_.size(); ++i) {
      if (i) s += ",";
      s += alternatives_[i].id;
      if (kind_ == Kind::weighted_alternatives) s += ":" + std::to_string(weights_[i]);
    }
    return s + "}";
  }

private:
  Baseline(Kind kind, std::vector<Event> alternatives, std::vector<double> weights)
      : kind_(kind), alternatives_(std::move(alternatives)), weights_(std::move(weights)) {}

  Kind kind_;
  std::vector<Event> alternatives_;
  std::vector<double> weights_;
};

enum class Backend { exact, monte_carlo };

constexpr std::string_view to_string(Backend b) noexcept {
  return b == Backend::exact ? "exact" : "monte-carlo";
}

struct EstimatorConfig {
  Backend backend = Backend::exact;
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
  std::size_t bootstrap_resamples = 200;

  void validate() const {
    if (backend == Backend::monte_carlo && n_samples < 100)
      throw error(errc::invalid_estimator, "monte-carlo needs at least 100 samples");
    if (backend == Backend::monte_carlo && bootstrap_resamples < 2)
      throw error(errc::invalid_estimator, "bootstrap needs at least 2 resamples");
  }
};

struct ZEstimate {
  double value = 0.0;       // bits, negative = uncertainty-reducing
  double std_error = 0.0;   // bits, 0 for the exact back-end
  Backend method = Backend::exact;
  std::size_t n_samples = 0;
  Horizon horizon;
  std::string event;
  std::string baseline;

  bool operator==(const ZEstimate&) const = default;
};

enum class EventClass { beneficial, harmful, neutral };

constexpr std::string_view to_string(EventClass c) noexcept {
  switch (c) {
    case EventClass::beneficial: return "beneficial";
    case EventClass::harmful: return "harmful";
    case EventClass::neutral: return "neutral";
  }
  return "neutral";
}

inline constexpr double kDefaultNeutralTolerance = 0.01;

// A system whose state at a future horizon can be enumerated and/or sampled,
// conditioned on an event applied at t0 (std::nullopt = no event).
template <class M>
concept SystemModel = requires(const M& m, const std::optional<Event>& event, const Horizon& h, Rng& rng) {
  { m.event_space() } -> std::convertible_to<std::vector<Event>>;
  { m.exact_future_distribution(event, h) } -> std::same_as<std::optional<Distribution>>;
  { m.sample_future_outcome(event, h, rng) } -> std::same_as<std::optional<Outcome>>;
};

inline EventClass classify_event(const ZEstimate& z, double tol = kDefaultNeutralTolerance) {
  if (z.value < -tol) return EventClass::beneficial;
  if (z.value > tol) return EventClass::harmful;
  return EventClass::neutral;
}

struct BranchEntropy {
  double bits = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
};

namespace detail {

template <SystemModel M>
void require_admissible(const M& model, const Event& event) {
  for (const auto& e : model.event_space())
    if (e.id == event.id) return;
  throw error(errc::event_not_admissible, "event '" + event.id + "' is not admissible at t0");
}

template <SystemModel M>
double exact_branch(const M& model, const std::optional<Event>& event, const Horizon& h) {
  auto d = model.exact_future_distribution(event, h);
  if (!d) throw error(errc::unsupported_backend, "model cannot enumerate its future distribution");
  return shannon_entropy(*d);
}

// Sample standard deviation of plug-in entropies over multinomial resamples
// of the observed count vector.
inline double bootstrap_std_error(std::span<const std::uint64_t> counts, std::size_t resamples, Rng& rng) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  std::vector<double> freq;
  freq.reserve(counts.size());
  for (auto c : counts) freq.push_back(static_cast<double>(c) / static_cast<double>(n));
  std::vector<double> h(resamples);
  for (auto& v : h) v = count_entropy_bits(rng.multinomial(n, freq));
  double mean = 0.0;
  for (double v : h) mean += v;
  mean /= static_cast<double>(resamples);
  double ss = 0.0;
  for (double v : h) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(resamples - 1));
}

}  // namespace detail

// Plug-in entropy of n sampled outcomes of X_T with a bootstrap standard error.
template <SystemModel M>
BranchEntropy mc_entropy_of_branch(const M& model, const std::optional<Event>& event, const Horizon& h,
                                   std::size_t n, std::uint64_t seed, std::size_t resamples = 200) {
  h.validate();
  if (n < 100) throw error(errc::invalid_estimator, "monte-carlo needs at least 100 samples");
  if (resamples < 2) throw error(errc::invalid_estimator, "bootstrap needs at least 2 resamples");
  Rng rng(seed);
  std::unordered_map<Outcome, std::uint64_t> tally;
  for (std::size_t i = 0; i < n; ++i) {
    auto o = model.sample_future_outcome(event, h, rng);
    if (!o) throw error(errc::sampling_unsupported, "model cannot sample its future state");
    ++tally[*o];
  }
  // Fixed label order keeps the bootstrap stream independent of hash layout.
  std::vector<std::pair<Outcome, std::uint64_t>> sorted(tally.begin(), tally.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> counts;
  counts.reserve(sorted.size());
  for (const auto& [_, c] : sorted) counts.push_back(c);

  BranchEntropy out;
  out.bits = plugin_entropy(counts);
  out.n_samples = n;
  out.std_error = counts.size() > 1 ? detail::bootstrap_std_error(counts, resamples, rng) : 0.0;
  return out;
}

namespace detail {

template <SystemModel M>
BranchEntropy branch(const M& model, const std::optional<Event>& event, const Horizon& h,
                     const EstimatorConfig& est, std::uint64_t stream) {
  if (est.backend == Backend::exact) return {exact_branch(model, event, h), 0.0, 0};
  return mc_entropy_of_branch(model, event, h, est.n_samples, derive_seed(est.seed, stream),
                              est.bootstrap_resamples);
}

}  // namespace detail

// Entropy at T after applying the event at t0 minus entropy at T when
// nothing is applied at t0.
template <SystemModel M>
ZEstimate z_pre_post(const M& model, const Event& event, const Horizon& horizon,
                     const EstimatorConfig& est = {}) {
  horizon.validate();
  est.validate();
  detail::require_admissible(model, event);
  const auto post = detail::branch(model, std::optional<Event>(event), horizon, est, 0);
  const auto pre = detail::branch(model, std::optional<Event>(), horizon, est, 1);
  ZEstimate z;
  z.value = post.bits - pre.bits;
  z.std_error = std::hypot(post.std_error, pre.std_error);
  z.method = est.backend;
  z.n_samples = post.n_samples;
  z.horizon = horizon;
  z.event = event.id;
  z.baseline = "null";
  return z;
}

// H(X_T | A) minus the baseline-weighted mean of H(X_T | A') over the
// alternatives A'. A null-event baseline reduces to z_pre_post.
template <SystemModel M>
ZEstimate z_counterfactual(const M& model, const Event& event, const Baseline& baseline,
                           const Horizon& horizon, const EstimatorConfig& est = {}) {
  if (baseline.kind() == Baseline::Kind::null_event) return z_pre_post(model, event, horizon, est);
  horizon.validate();
  est.validate();
  if (baseline.alternatives().empty()) throw error(errc::empty_baseline, "baseline has no alternatives");
  detail::require_admissible(model, event);
  for (const auto& alt : baseline.alternatives()) {
    if (alt.id == event.id) throw error(errc::event_in_baseline, "event '" + event.id + "' appears in its own baseline");
    detail::require_admissible(model, alt);
  }

  const auto given = detail::branch(model, std::optional<Event>(event), horizon, est, 0);
  double expected = 0.0;
  double var = given.std_error * given.std_error;
  for (std::size_t i = 0; i < baseline.alternatives().size(); ++i) {
    const double w = baseline.weights()[i];
    const auto alt = detail::branch(model, std::optional<Event>(baseline.alternatives()[i]), horizon, est, i + 1);
    expected += w * alt.bits;
    var += w * w * alt.std_error * alt.std_error;
  }
  ZEstimate z;
  z.value = given.bits - expected;
  z.std_error = std::sqrt(var);
  z.method = est.backend;
  z.n_samples = given.n_samples;
  z.horizon = horizon;
  z.event = event.id;
  z.baseline = baseline.summary();
  return z;
}

// Each event is compared against a uniform baseline over the other events.
struct EachVsRestUniform {};

using BaselineRule = std::variant<EachVsRestUniform, Baseline>;

struct RankedEvent {
  Event event;
  ZEstimate z;
};

// Scores every event and sorts ascending (most uncertainty-reducing first),
// ties broken by event id. Monte Carlo seeds derive from the input position.
template <SystemModel M>
std::vector<RankedEvent> rank_events(const M& model, const std::vector<Event>& events, const BaselineRule& rule,
                                     const Horizon& horizon, const EstimatorConfig& est = {}) {
  if (events.empty()) throw error(errc::event_not_admissible, "no events to rank");
  std::vector<RankedEvent> out;
  out.reserve(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    EstimatorConfig local = est;
    local.seed = derive_seed(est.seed, i);
    Baseline baseline = Baseline::null_event();
    if (std::holds_alternative<EachVsRestUniform>(rule)) {
      std::vector<Event> rest;
      for (std::size_t j = 0; j < events.size(); ++j)
        if (j != i) rest.push_back(events[j]);
      baseline = Baseline::uniform(std::move(rest));
    } else {
      baseline = std::get<Baseline>(rule);
    }
    out.push_back({events[i], z_counterfactual(model, events[i], baseline, horizon, local)});
  }
  std::sort(out.begin(), out.end(), [](const RankedEvent& a, const RankedEvent& b) {
    if (a.z.value != b.z.value) return a.z.value < b.z.value;
    return a.event.id < b.event.id;
  });
  return out;
}

}  // namespace zentropy

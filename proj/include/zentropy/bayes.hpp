#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zentropy/entropic_potential.hpp"
#include "zentropy/entropy.hpp"
#include "zentropy/error.hpp"

namespace zentropy {

enum class Coin : std::uint8_t { tails = 0, heads = 1 };

inline constexpr std::array<Coin, 2> kCoinOutcomes{Coin::tails, Coin::heads};

constexpr std::string_view to_string(Coin c) noexcept { return c == Coin::heads ? "heads" : "tails"; }

inline std::optional<Coin> parse_coin(std::string_view s) {
  if (s == "heads" || s == "H" || s == "1") return Coin::heads;
  if (s == "tails" || s == "T" || s == "0") return Coin::tails;
  return std::nullopt;
}

// Bernoulli trial with P(heads | theta) = noise + (1 - 2 noise) theta.
// noise = 0 is a clean flip of a coin with bias theta; noise = 0.5 makes the
// outcome independent of theta.
struct ObservationModel {
  double noise = 0.0;

  void validate() const {
    if (!(noise >= 0.0 && noise <= 0.5)) throw error(errc::invalid_posterior, "noise must lie in [0, 0.5]");
  }

  double likelihood(double theta, Coin outcome) const {
    const double heads = noise + (1.0 - 2.0 * noise) * theta;
    return outcome == Coin::heads ? heads : 1.0 - heads;
  }
};

struct QueryCandidate {
  std::string id;
  ObservationModel model;
};

// Belief over an increasing grid of parameter values in [0, 1].
class GridPosterior {
public:
  GridPosterior(std::vector<double> grid, std::vector<double> belief) : grid_(std::move(grid)) {
    if (grid_.empty()) throw error(errc::invalid_posterior, "empty grid");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
      if (!(grid_[i] >= 0.0 && grid_[i] <= 1.0)) throw error(errc::invalid_posterior, "grid values must lie in [0, 1]");
      if (i && !(grid_[i] > grid_[i - 1])) throw error(errc::invalid_posterior, "grid must be strictly increasing");
    }
    try {
      belief_ = Distribution(labels(grid_), std::move(belief)).probs();
    } catch (const error& e) {
      throw error(errc::invalid_posterior, e.what());
    }
  }

  // n equally spaced points on [0, 1] with a uniform belief.
  static GridPosterior uniform(std::size_t n) {
    if (n < 2) throw error(errc::invalid_posterior, "uniform grid needs at least 2 points");
    std::vector<double> grid(n);
    for (std::size_t i = 0; i < n; ++i) grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    return {std::move(grid), std::vector<double>(n, 1.0 / static_cast<double>(n))};
  }

  const std::vector<double>& grid() const noexcept { return grid_; }
  const std::vector<double>& belief() const noexcept { return belief_; }
  std::size_t size() const noexcept { return grid_.size(); }

  double entropy() const { return entropy_bits(belief_); }

  Distribution distribution() const { return {labels(grid_), belief_}; }

  // P(outcome) = sum_i belief_i likelihood(theta_i, outcome).
  double predictive(const ObservationModel& m, Coin outcome) const {
    double p = 0.0;
    for (std::size_t i = 0; i < grid_.size(); ++i) p += belief_[i] * m.likelihood(grid_[i], outcome);
    return p;
  }

private:
  static std::vector<Outcome> labels(const std::vector<double>& grid) {
    std::vector<Outcome> out;
    out.reserve(grid.size());
    for (double v : grid) {
      std::array<char, 32> buf{};
      auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
      out.emplace_back(buf.data(), end);
    }
    return out;
  }

  std::vector<double> grid_;
  std::vector<double> belief_;
};

inline GridPosterior posterior_update(const GridPosterior& p, const ObservationModel& m, Coin outcome) {
  m.validate();
  std::vector<double> post(p.size());
  double evidence = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    post[i] = p.belief()[i] * m.likelihood(p.grid()[i], outcome);
    evidence += post[i];
  }
  if (!(evidence > 0.0)) throw error(errc::zero_evidence, std::string(to_string(outcome)) + " is impossible under the belief");
  for (double& b : post) b /= evidence;
  return {p.grid(), std::move(post)};
}

// Entropy after the observed outcome minus the prior entropy.
inline ZEstimate realized_event_potential(const GridPosterior& p, const ObservationModel& m, Coin outcome,
                                          Horizon horizon = {0, 1}) {
  ZEstimate z;
  z.value = posterior_update(p, m, outcome).entropy() - p.entropy();
  z.horizon = horizon;
  z.event = std::string(to_string(outcome));
  z.baseline = "null";
  return z;
}

// Predictive-weighted posterior entropy minus the prior entropy, i.e. the
// counterfactual form with A = "run the query" and a null baseline.
inline ZEstimate expected_event_potential(const GridPosterior& p, const QueryCandidate& q) {
  q.model.validate();
  double expected = 0.0;
  for (auto o : kCoinOutcomes) {
    const double po = p.predictive(q.model, o);
    if (po > 0.0) expected += po * posterior_update(p, q.model, o).entropy();
  }
  ZEstimate z;
  z.value = expected - p.entropy();
  z.horizon = {0, 1};
  z.event = q.id;
  z.baseline = "null";
  return z;
}

// I(theta; outcome) from the joint table by the double-sum definition.
inline double mutual_information(const GridPosterior& p, const QueryCandidate& q) {
  q.model.validate();
  std::array<double, 2> marginal{p.predictive(q.model, Coin::tails), p.predictive(q.model, Coin::heads)};
  double mi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (auto o : kCoinOutcomes) {
      const double joint = p.belief()[i] * q.model.likelihood(p.grid()[i], o);
      if (joint > 0.0) mi += joint * std::log2(joint / (p.belief()[i] * marginal[static_cast<std::size_t>(o)]));
    }
  }
  return mi;
}

struct QueryScore {
  QueryCandidate query;
  ZEstimate expected_z;
  double mutual_information = 0.0;
};

// Ascending by expected Z (most uncertainty-reducing first), ties by id.
inline std::vector<QueryScore> rank_queries(const GridPosterior& p, const std::vector<QueryCandidate>& qs) {
  if (qs.empty()) throw error(errc::event_not_admissible, "no query candidates");
  std::vector<QueryScore> out;
  out.reserve(qs.size());
  for (const auto& q : qs) out.push_back({q, expected_event_potential(p, q), mutual_information(p, q)});
  std::stable_sort(out.begin(), out.end(), [](const QueryScore& a, const QueryScore& b) {
    if (a.expected_z.value != b.expected_z.value) return a.expected_z.value < b.expected_z.value;
    return a.query.id < b.query.id;
  });
  return out;
}

}  // namespace zentropy

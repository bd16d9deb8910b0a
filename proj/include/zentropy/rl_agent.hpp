#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "zentropy/entropic_potential.hpp"
#include "zentropy/error.hpp"
#include "zentropy/gridworld.hpp"
#include "zentropy/random.hpp"

namespace zentropy {

class QTable {
public:
  explicit QTable(std::size_t cells) : values_(cells, ActionProbs{0.0, 0.0, 0.0, 0.0}) {}

  double operator()(std::size_t cell, Action a) const { return values_[cell][static_cast<std::size_t>(a)]; }
  double& operator()(std::size_t cell, Action a) { return values_[cell][static_cast<std::size_t>(a)]; }

  double max(std::size_t cell) const {
    const auto& row = values_[cell];
    return std::max(std::max(row[0], row[1]), std::max(row[2], row[3]));
  }

  // First maximizing action in up, down, left, right order.
  Action argmax(std::size_t cell) const {
    std::size_t best = 0;
    for (std::size_t a = 1; a < 4; ++a)
      if (values_[cell][a] > values_[cell][best]) best = a;
    return kAllActions[best];
  }

  std::size_t size() const noexcept { return values_.size(); }
  bool operator==(const QTable&) const = default;

private:
  std::vector<ActionProbs> values_;
};

// r_env - beta * Z: uncertainty-reducing actions earn a bonus, the rest a penalty.
inline double shaped_reward(double r_env, const ZEstimate& z, double beta) {
  if (beta < 0.0) throw error(errc::invalid_hyperparameter, "beta must be non-negative");
  return r_env - beta * z.value;
}

inline void q_update(QTable& q, std::size_t s, Action a, double reward, std::size_t next, double alpha, double gamma) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw error(errc::invalid_hyperparameter, "alpha must lie in (0, 1]");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw error(errc::invalid_hyperparameter, "gamma must lie in [0, 1]");
  q(s, a) = (1.0 - alpha) * q(s, a) + alpha * (reward + gamma * q.max(next));
}

// Greedy policy, uniform over tied maxima.
inline Policy greedy_policy(const QTable& q) {
  std::vector<ActionProbs> rows(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double m = q.max(i);
    int ties = 0;
    for (auto a : kAllActions) ties += q(i, a) == m;
    for (auto a : kAllActions) rows[i][static_cast<std::size_t>(a)] = q(i, a) == m ? 1.0 / ties : 0.0;
  }
  return Policy(std::move(rows));
}

enum class ZPolicy { current_greedy, fixed_uniform };

constexpr std::string_view to_string(ZPolicy p) noexcept {
  return p == ZPolicy::current_greedy ? "current-greedy" : "fixed-uniform";
}

struct ShapingConfig {
  double beta = 0.0;
  int horizon_k = 32;
  int recompute_every = 10;
  ZPolicy z_policy = ZPolicy::fixed_uniform;

  void validate() const {
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw error(errc::invalid_hyperparameter, "beta must be >= 0");
    if (horizon_k < 1) throw error(errc::invalid_hyperparameter, "horizon_k must be >= 1");
    if (recompute_every < 1) throw error(errc::invalid_hyperparameter, "recompute_every must be >= 1");
  }
};

struct TrainConfig {
  int episodes = 500;
  int max_steps = 100;
  double epsilon = 0.1;
  double alpha = 0.5;
  double gamma = 0.95;
  std::uint64_t seed = 0;

  void validate() const {
    if (episodes < 0) throw error(errc::invalid_hyperparameter, "episodes must be >= 0");
    if (max_steps < 1) throw error(errc::invalid_hyperparameter, "max_steps must be >= 1");
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw error(errc::invalid_hyperparameter, "epsilon must lie in [0, 1]");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw error(errc::invalid_hyperparameter, "alpha must lie in (0, 1]");
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw error(errc::invalid_hyperparameter, "gamma must lie in [0, 1]");
  }
};

// Z per (cell, action), refreshed at the start of `episode`.
struct ZSnapshot {
  int episode = 0;
  std::vector<ActionProbs> z;

  bool operator==(const ZSnapshot&) const = default;
};

struct TrainResult {
  std::vector<double> returns;         // undiscounted environment return
  std::vector<int> steps;              // steps taken (max_steps when the goal was missed)
  std::vector<double> mean_intrinsic;  // mean -beta * Z per step
  std::vector<std::optional<Action>> greedy;  // empty for walls and the goal
  std::vector<ZSnapshot> snapshots;
  QTable q{0};

  bool operator==(const TrainResult&) const = default;
};

namespace detail {

inline Action epsilon_greedy(const QTable& q, std::size_t s, double epsilon, Rng& rng) {
  if (rng.uniform() < epsilon) return kAllActions[rng.below(4)];
  const double m = q.max(s);
  std::array<Action, 4> tied{};
  std::size_t n = 0;
  for (auto a : kAllActions)
    if (q(s, a) == m) tied[n++] = a;
  return n == 1 ? tied[0] : tied[rng.below(n)];
}

inline std::vector<ActionProbs> z_table(const GridWorld& g, const Policy& follow, int k) {
  std::vector<ActionProbs> z(g.cell_count(), ActionProbs{0.0, 0.0, 0.0, 0.0});
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    if (g.is_wall(i) || g.is_goal(i)) continue;
    for (const auto& s : action_z_scores(g, g.cell(i), follow, k))
      z[i][static_cast<std::size_t>(s.action)] = s.z.value;
  }
  return z;
}

}  // namespace detail

// Epsilon-greedy tabular Q-learning with reward +1 on reaching the goal.
// With beta > 0 each step adds -beta * Z(s, a), Z taken from an exact
// cache refreshed every `recompute_every` episodes. With beta = 0 the Z
// machinery is never touched.
inline TrainResult train(const GridWorld& g, const ShapingConfig& shaping, const TrainConfig& cfg) {
  shaping.validate();
  cfg.validate();
  Rng rng(cfg.seed);
  TrainResult result;
  result.q = QTable(g.cell_count());
  QTable& q = result.q;
  const bool shaped = shaping.beta > 0.0;
  std::vector<ActionProbs> z_cache;

  for (int ep = 0; ep < cfg.episodes; ++ep) {
    if (shaped && ep % shaping.recompute_every == 0) {
      // The uniform follow-on table never changes.
      if (shaping.z_policy == ZPolicy::current_greedy)
        z_cache = detail::z_table(g, greedy_policy(q), shaping.horizon_k);
      else if (z_cache.empty())
        z_cache = detail::z_table(g, Policy::uniform(g), shaping.horizon_k);
      result.snapshots.push_back({ep, z_cache});
    }
    std::size_t s = g.index(g.start());
    double ret = 0.0;
    double intrinsic = 0.0;
    int t = 0;
    while (t < cfg.max_steps && !g.is_goal(s)) {
      const Action a = detail::epsilon_greedy(q, s, cfg.epsilon, rng);
      const std::size_t next = sample_step(g, s, a, rng);
      const double r_env = g.is_goal(next) ? 1.0 : 0.0;
      double r = r_env;
      if (shaped) {
        ZEstimate z;
        z.value = z_cache[s][static_cast<std::size_t>(a)];
        r = shaped_reward(r_env, z, shaping.beta);
        intrinsic += r - r_env;
      }
      q_update(q, s, a, r, next, cfg.alpha, cfg.gamma);
      ret += r_env;
      s = next;
      ++t;
    }
    result.returns.push_back(ret);
    result.steps.push_back(t);
    result.mean_intrinsic.push_back(t > 0 ? intrinsic / t : 0.0);
  }

  result.greedy.assign(g.cell_count(), std::nullopt);
  for (std::size_t i = 0; i < g.cell_count(); ++i)
    if (!g.is_wall(i) && !g.is_goal(i)) result.greedy[i] = q.argmax(i);
  return result;
}

struct PolicyStats {
  double mean_return = 0.0;
  double mean_steps = 0.0;
};

// Seeded rollouts; episode i draws from its own derived stream.
inline PolicyStats evaluate_policy(const GridWorld& g, const Policy& pi, int n_episodes, int max_steps,
                                   std::uint64_t seed) {
  if (n_episodes < 1 || max_steps < 1) throw error(errc::invalid_hyperparameter, "need episodes and steps");
  if (pi.size() != g.cell_count()) throw error(errc::invalid_policy, "policy does not cover the grid");
  PolicyStats stats;
  for (int ep = 0; ep < n_episodes; ++ep) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(ep)));
    std::size_t s = g.index(g.start());
    int t = 0;
    while (t < max_steps && !g.is_goal(s)) {
      s = sample_step(g, s, sample_action(pi, s, rng), rng);
      ++t;
    }
    stats.mean_return += g.is_goal(s) ? 1.0 : 0.0;
    stats.mean_steps += t;
  }
  stats.mean_return /= n_episodes;
  stats.mean_steps /= n_episodes;
  return stats;
}

}  // namespace zentropy

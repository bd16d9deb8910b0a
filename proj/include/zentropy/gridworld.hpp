#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "zentropy/entropic_potential.hpp"
#include "zentropy/entropy.hpp"
#include "zentropy/error.hpp"
#include "zentropy/random.hpp"

namespace zentropy {

struct Cell {
  int x = 0;
  int y = 0;

  auto operator<=>(const Cell&) const = default;
};

enum class Action : std::uint8_t { up, down, left, right };

inline constexpr std::array<Action, 4> kAllActions{Action::up, Action::down, Action::left, Action::right};

constexpr std::string_view to_string(Action a) noexcept {
  switch (a) {
    case Action::up: return "up";
    case Action::down: return "down";
    case Action::left: return "left";
    case Action::right: return "right";
  }
  return "up";
}

inline std::optional<Action> parse_action(std::string_view s) {
  for (auto a : kAllActions)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

inline Event action_event(Action a) {
  return {std::string(to_string(a)), "take action " + std::string(to_string(a)) + " at t0"};
}

// Rectangular grid, row 0 at the top; `up` decreases y. The goal is
// absorbing. A move succeeds with probability 1 - slip, otherwise the agent
// stays; moves into walls or the border also stay.
class GridWorld {
public:
  static constexpr int kMaxCells = 4096;

  GridWorld(int width, int height, std::set<Cell> walls, Cell goal, Cell start, double slip)
      : width_(width), height_(height), walls_(std::move(walls)), goal_(goal), start_(start), slip_(slip) {
    if (width < 1 || height < 1 || static_cast<long>(width) * height > kMaxCells)
      throw error(errc::invalid_grid, "grid must have between 1 and 4096 cells");
    if (!(slip >= 0.0 && slip < 1.0)) throw error(errc::invalid_grid, "slip must lie in [0, 1)");
    if (!contains(goal) || !contains(start)) throw error(errc::invalid_grid, "goal/start outside the grid");
    for (const auto& w : walls_)
      if (!contains(w)) throw error(errc::invalid_grid, "wall outside the grid");
    if (walls_.count(goal) || walls_.count(start)) throw error(errc::invalid_grid, "goal/start on a wall");
    wall_mask_.assign(cell_count(), false);
    for (const auto& w : walls_) wall_mask_[index(w)] = true;
  }

  // 1 x length corridor, start at the left end, goal at the right end.
  static GridWorld corridor(int length, double slip) {
    return {length, 1, {}, {length - 1, 0}, {0, 0}, slip};
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  double slip() const noexcept { return slip_; }
  Cell goal() const noexcept { return goal_; }
  Cell start() const noexcept { return start_; }
  const std::set<Cell>& walls() const noexcept { return walls_; }

  std::size_t cell_count() const noexcept { return static_cast<std::size_t>(width_) * height_; }
  bool contains(Cell c) const noexcept { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  std::size_t index(Cell c) const noexcept { return static_cast<std::size_t>(c.y) * width_ + c.x; }
  Cell cell(std::size_t i) const noexcept {
    return {static_cast<int>(i % width_), static_cast<int>(i / width_)};
  }
  bool is_wall(std::size_t i) const noexcept { return wall_mask_[i]; }
  bool is_goal(std::size_t i) const noexcept { return i == index(goal_); }

  std::size_t open_cell_count() const noexcept { return cell_count() - walls_.size(); }

  // Destination of a successful move (the same cell when blocked).
  std::size_t target(std::size_t i, Action a) const noexcept {
    Cell c = cell(i);
    switch (a) {
      case Action::up: --c.y; break;
      case Action::down: ++c.y; break;
      case Action::left: --c.x; break;
      case Action::right: ++c.x; break;
    }
    if (!contains(c) || is_wall(index(c))) return i;
    return index(c);
  }

  static Outcome label(Cell c) { return std::to_string(c.x) + "," + std::to_string(c.y); }
  Outcome label(std::size_t i) const { return label(cell(i)); }

  void require_open(Cell c) const {
    if (!contains(c)) throw error(errc::invalid_grid, "cell " + label(c) + " outside the grid");
    if (is_wall(index(c))) throw error(errc::cell_is_wall, "cell " + label(c) + " is a wall");
  }

  bool operator==(const GridWorld& o) const {
    return width_ == o.width_ && height_ == o.height_ && walls_ == o.walls_ && goal_ == o.goal_ &&
           start_ == o.start_ && slip_ == o.slip_;
  }

private:
  int width_;
  int height_;
  std::set<Cell> walls_;
  Cell goal_;
  Cell start_;
  double slip_;
  std::vector<bool> wall_mask_;
};

// Dense probability mass over cell indices.
struct StateDistribution {
  std::vector<double> mass;

  static StateDistribution point(const GridWorld& g, Cell c) {
    g.require_open(c);
    StateDistribution d{std::vector<double>(g.cell_count(), 0.0)};
    d.mass[g.index(c)] = 1.0;
    return d;
  }

  double total() const noexcept {
    double s = 0.0;
    for (double p : mass) s += p;
    return s;
  }

  double entropy() const { return entropy_bits(mass); }

  // Labeled distribution over the cells carrying mass, in index order.
  Distribution to_distribution(const GridWorld& g) const {
    std::vector<Outcome> labels;
    std::vector<double> probs;
    for (std::size_t i = 0; i < mass.size(); ++i) {
      if (mass[i] > 0.0) {
        labels.push_back(g.label(i));
        probs.push_back(mass[i]);
      }
    }
    return {std::move(labels), std::move(probs)};
  }
};

using ActionProbs = std::array<double, 4>;

// Per-cell action distribution; wall entries are ignored.
class Policy {
public:
  explicit Policy(std::vector<ActionProbs> table) : table_(std::move(table)) {
    for (const auto& row : table_) {
      double s = 0.0;
      for (double p : row) {
        if (!(p >= 0.0)) throw error(errc::invalid_policy, "negative action probability");
        s += p;
      }
      if (std::abs(s - 1.0) > kNormalizationTolerance) throw error(errc::invalid_policy, "action probabilities must sum to 1");
    }
  }

  static Policy always(const GridWorld& g, Action a) {
    ActionProbs row{};
    row[static_cast<std::size_t>(a)] = 1.0;
    return Policy(std::vector<ActionProbs>(g.cell_count(), row));
  }

  static Policy uniform(const GridWorld& g) {
    return Policy(std::vector<ActionProbs>(g.cell_count(), ActionProbs{0.25, 0.25, 0.25, 0.25}));
  }

  const ActionProbs& operator[](std::size_t cell) const { return table_[cell]; }
  std::size_t size() const noexcept { return table_.size(); }

  bool operator==(const Policy&) const = default;

private:
  std::vector<ActionProbs> table_;
};

inline Distribution transition_kernel(const GridWorld& g, Cell c, Action a) {
  g.require_open(c);
  const auto i = g.index(c);
  if (g.is_goal(i)) return Distribution::point_mass(g.label(i));
  const auto to = g.target(i, a);
  if (to == i || g.slip() == 0.0) return Distribution::point_mass(g.label(to));
  return {{g.label(to), g.label(i)}, {1.0 - g.slip(), g.slip()}};
}

namespace detail {

inline void apply_kernel(const GridWorld& g, std::size_t i, Action a, double p, std::vector<double>& out) {
  if (g.is_goal(i)) {
    out[i] += p;
    return;
  }
  const auto to = g.target(i, a);
  out[to] += p * (1.0 - g.slip());
  out[i] += p * g.slip();
}

}  // namespace detail

// One exact step where every cell takes the same action.
inline StateDistribution push_forward(const GridWorld& g, const StateDistribution& d, Action a) {
  StateDistribution out{std::vector<double>(g.cell_count(), 0.0)};
  for (std::size_t i = 0; i < d.mass.size(); ++i)
    if (d.mass[i] > 0.0) detail::apply_kernel(g, i, a, d.mass[i], out.mass);
  return out;
}

// One exact step of the mixture sum_s d(s) sum_a pi(a|s) kernel(s, a).
inline StateDistribution push_forward(const GridWorld& g, const StateDistribution& d, const Policy& pi) {
  StateDistribution out{std::vector<double>(g.cell_count(), 0.0)};
  for (std::size_t i = 0; i < d.mass.size(); ++i) {
    if (d.mass[i] <= 0.0) continue;
    for (auto a : kAllActions) {
      const double pa = pi[i][static_cast<std::size_t>(a)];
      if (pa > 0.0) detail::apply_kernel(g, i, a, d.mass[i] * pa, out.mass);
    }
  }
  return out;
}

// Applies `first` once (when given) and then the follow-on policy for the
// remaining steps; k steps in total.
inline StateDistribution future_state_distribution(const GridWorld& g, const StateDistribution& start,
                                                   std::optional<Action> first, const Policy& follow, int k) {
  if (k < 1) throw error(errc::invalid_horizon, "need at least one step");
  StateDistribution d = first ? push_forward(g, start, *first) : push_forward(g, start, follow);
  for (int step = 1; step < k; ++step) d = push_forward(g, d, follow);
  return d;
}

inline std::size_t sample_step(const GridWorld& g, std::size_t i, Action a, Rng& rng) {
  if (g.is_goal(i)) return i;
  const auto to = g.target(i, a);
  // Draw even when blocked so the stream does not depend on wall layout.
  const double u = rng.uniform();
  return u < 1.0 - g.slip() ? to : i;
}

inline Action sample_action(const Policy& pi, std::size_t i, Rng& rng) {
  return kAllActions[rng.categorical(pi[i])];
}

inline Cell sample_trajectory(const GridWorld& g, Cell start, std::optional<Action> first, const Policy& follow,
                              int k, Rng& rng) {
  if (k < 1) throw error(errc::invalid_horizon, "need at least one step");
  g.require_open(start);
  std::size_t s = g.index(start);
  int step = 0;
  if (first) {
    s = sample_step(g, s, *first, rng);
    ++step;
  }
  for (; step < k; ++step) s = sample_step(g, s, sample_action(follow, s, rng), rng);
  return g.cell(s);
}

inline Cell sample_trajectory(const GridWorld& g, Cell start, std::optional<Action> first, const Policy& follow,
                              int k, std::uint64_t seed) {
  Rng rng(seed);
  return sample_trajectory(g, start, first, follow, k, rng);
}

// SystemModel view of the grid: the state at t0 is the agent's cell, an
// event is the first action, and the follow-on policy runs afterwards.
class GridModel {
public:
  GridModel(GridWorld g, Cell at, Policy follow, std::vector<Action> actions = {kAllActions.begin(), kAllActions.end()})
      : grid_(std::move(g)), at_(at), follow_(std::move(follow)), actions_(std::move(actions)) {
    grid_.require_open(at_);
  }

  std::vector<Event> event_space() const {
    std::vector<Event> out;
    for (auto a : actions_) out.push_back(action_event(a));
    return out;
  }

  std::optional<Distribution> exact_future_distribution(const std::optional<Event>& event, const Horizon& h) const {
    h.validate();
    auto d = future_state_distribution(grid_, StateDistribution::point(grid_, at_), to_action(event), follow_, h.steps());
    return d.to_distribution(grid_);
  }

  std::optional<Outcome> sample_future_outcome(const std::optional<Event>& event, const Horizon& h, Rng& rng) const {
    return GridWorld::label(sample_trajectory(grid_, at_, to_action(event), follow_, h.steps(), rng));
  }

  const GridWorld& grid() const noexcept { return grid_; }

private:
  std::optional<Action> to_action(const std::optional<Event>& event) const {
    if (!event) return std::nullopt;
    auto a = parse_action(event->id);
    if (!a || std::find(actions_.begin(), actions_.end(), *a) == actions_.end())
      throw error(errc::event_not_admissible, "unknown action '" + event->id + "'");
    return a;
  }

  GridWorld grid_;
  Cell at_;
  Policy follow_;
  std::vector<Action> actions_;
};

static_assert(SystemModel<GridModel>);

struct ActionScore {
  Action action;
  ZEstimate z;
};

// Z of each candidate action against a uniform baseline over the other
// candidates, sorted most beneficial first.
inline std::vector<ActionScore> action_z_scores(const GridWorld& g, Cell c, const Policy& follow, int k,
                                                const EstimatorConfig& est = {},
                                                std::vector<Action> actions = {kAllActions.begin(), kAllActions.end()}) {
  GridModel model(g, c, follow, actions);
  std::vector<ActionScore> out;
  for (auto& r : rank_events(model, model.event_space(), EachVsRestUniform{}, Horizon{0, k}, est))
    out.push_back({*parse_action(r.event.id), std::move(r.z)});
  return out;
}

// '#' wall, 'G' goal, 'S' start, '.' open.
inline std::string render_ascii(const GridWorld& g) {
  std::string out;
  for (int y = 0; y < g.height(); ++y) {
    for (int x = 0; x < g.width(); ++x) {
      const Cell c{x, y};
      char ch = '.';
      if (g.walls().count(c)) ch = '#';
      else if (c == g.goal()) ch = 'G';
      else if (c == g.start()) ch = 'S';
      out += ch;
    }
    out += '\n';
  }
  return out;
}

}  // namespace zentropy

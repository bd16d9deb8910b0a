#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zentropy/entropic_potential.hpp"
#include "zentropy/entropy.hpp"
#include "zentropy/error.hpp"
#include "zentropy/random.hpp"

namespace zentropy {

// Row-stochastic matrix, rows indexed by source state.
using TransitionMatrix = std::vector<std::vector<double>>;

// Finite-state chain with a known state law at t0. An event is an
// instantaneous kernel applied at t0; afterwards the chain runs its default
// dynamics for the remaining steps. No event means default dynamics only.
class FiniteMarkovModel {
public:
  struct EventKernel {
    Event event;
    TransitionMatrix kernel;
  };

  FiniteMarkovModel(std::vector<Outcome> states, std::vector<double> initial, TransitionMatrix dynamics,
                    std::vector<EventKernel> events)
      : states_(std::move(states)),
        initial_(std::move(initial)),
        dynamics_(std::move(dynamics)),
        events_(std::move(events)) {
    Distribution check(states_, initial_);  // validates labels and the initial law
    initial_ = check.probs();
    validate_kernel(dynamics_);
    for (const auto& e : events_) validate_kernel(e.kernel);
  }

  std::vector<Event> event_space() const {
    std::vector<Event> out;
    out.reserve(events_.size());
    for (const auto& e : events_) out.push_back(e.event);
    return out;
  }

  std::optional<Distribution> exact_future_distribution(const std::optional<Event>& event, const Horizon& h) const {
    h.validate();
    std::vector<double> d = initial_;
    if (event) d = push(d, kernel_for(*event));
    for (int i = 0; i < h.steps(); ++i) d = push(d, dynamics_);
    return Distribution(states_, std::move(d));
  }

  std::optional<Outcome> sample_future_outcome(const std::optional<Event>& event, const Horizon& h, Rng& rng) const {
    std::size_t s = rng.categorical(initial_);
    if (event) s = rng.categorical(kernel_for(*event)[s]);
    for (int i = 0; i < h.steps(); ++i) s = rng.categorical(dynamics_[s]);
    return states_[s];
  }

  const std::vector<Outcome>& states() const noexcept { return states_; }

  // Two states {0,1} that flip with probability `flip` each step. Events:
  // "clamp-0" sets the state to 0, "randomize" redraws it uniformly.
  static FiniteMarkovModel two_state_chain(double flip, std::vector<double> initial) {
    TransitionMatrix dyn{{1.0 - flip, flip}, {flip, 1.0 - flip}};
    std::vector<EventKernel> events{
        {{"clamp-0", "clamp state to 0"}, {{1.0, 0.0}, {1.0, 0.0}}},
        {{"randomize", "redraw state uniformly"}, {{0.5, 0.5}, {0.5, 0.5}}},
    };
    return {{"0", "1"}, std::move(initial), std::move(dyn), std::move(events)};
  }

private:
  void validate_kernel(const TransitionMatrix& m) const {
    if (m.size() != states_.size())
      throw error(errc::invalid_distribution, "kernel row count does not match state count");
    for (const auto& row : m) Distribution(states_, row);
  }

  const TransitionMatrix& kernel_for(const Event& event) const {
    for (const auto& e : events_)
      if (e.event.id == event.id) return e.kernel;
    throw error(errc::event_not_admissible, "unknown event '" + event.id + "'");
  }

  static std::vector<double> push(const std::vector<double>& d, const TransitionMatrix& m) {
    std::vector<double> out(d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (d[i] == 0.0) continue;
      for (std::size_t j = 0; j < d.size(); ++j) out[j] += d[i] * m[i][j];
    }
    return out;
  }

  std::vector<Outcome> states_;
  std::vector<double> initial_;
  TransitionMatrix dynamics_;
  std::vector<EventKernel> events_;
};

static_assert(SystemModel<FiniteMarkovModel>);

}  // namespace zentropy

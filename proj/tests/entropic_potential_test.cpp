#include <gtest/gtest.h>

#include <random>

#include "support/oracles.hpp"
#include "zentropy/zentropy.hpp"

namespace zentropy {
namespace {

constexpr double kCorridorZ = 0.982089268642079137;  // H(.68,.16,.16) - H(.96,.04)

// Uniform over n labels, only reachable by sampling.
struct SamplingOnlyModel {
  int n = 16;
  std::vector<Event> event_space() const { return {{"go", ""}}; }
  std::optional<Distribution> exact_future_distribution(const std::optional<Event>&, const Horizon&) const {
    return std::nullopt;
  }
  std::optional<Outcome> sample_future_outcome(const std::optional<Event>&, const Horizon&, Rng& rng) const {
    return std::to_string(rng.below(n));
  }
};
static_assert(SystemModel<SamplingOnlyModel>);

struct ExactOnlyModel {
  std::vector<Event> event_space() const { return {{"go", ""}}; }
  std::optional<Distribution> exact_future_distribution(const std::optional<Event>&, const Horizon&) const {
    return Distribution::uniform({"a", "b"});
  }
  std::optional<Outcome> sample_future_outcome(const std::optional<Event>&, const Horizon&, Rng&) const {
    return std::nullopt;
  }
};

GridModel corridor_at_3() {
  const auto g = GridWorld::corridor(5, 0.2);
  return GridModel(g, Cell{3, 0}, Policy::always(g, Action::right), {Action::left, Action::right});
}

TEST(ZPrePost, TwoStateChain) {
  const auto uniform_start = FiniteMarkovModel::two_state_chain(0.1, {0.5, 0.5});
  const auto clamp = z_pre_post(uniform_start, {"clamp-0", ""}, {0, 1});
  EXPECT_NEAR(clamp.value, oracle::h2(0.1) - 1.0, 1e-12);
  EXPECT_NEAR(clamp.value, -0.531004406410718779, 1e-12);
  EXPECT_EQ(clamp.std_error, 0.0);
  EXPECT_EQ(clamp.n_samples, 0u);
  EXPECT_EQ(clamp.method, Backend::exact);

  const auto known_start = FiniteMarkovModel::two_state_chain(0.1, {1.0, 0.0});
  EXPECT_NEAR(z_pre_post(known_start, {"randomize", ""}, {0, 1}).value, 1.0 - oracle::h2(0.1), 1e-12);
  EXPECT_EQ(classify_event(z_pre_post(known_start, {"randomize", ""}, {0, 1})), EventClass::harmful);
}

TEST(ZPrePost, DeterministicModelIsZero) {
  const auto chain = FiniteMarkovModel::two_state_chain(0.0, {1.0, 0.0});
  for (const auto& e : chain.event_space()) {
    if (e.id == "randomize") continue;
    EXPECT_EQ(z_pre_post(chain, e, {0, 3}).value, 0.0);
  }
}

TEST(ZPrePost, Errors) {
  const auto chain = FiniteMarkovModel::two_state_chain(0.1, {0.5, 0.5});
  try {
    z_pre_post(chain, {"nope", ""}, {0, 1});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::event_not_admissible);
  }
  EXPECT_THROW(z_pre_post(chain, {"clamp-0", ""}, {1, 1}), error);
  try {
    z_pre_post(SamplingOnlyModel{}, {"go", ""}, {0, 1});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unsupported_backend);
  }
  EstimatorConfig mc{Backend::monte_carlo, 1000, 1, 50};
  try {
    z_pre_post(ExactOnlyModel{}, {"go", ""}, {0, 1}, mc);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::sampling_unsupported);
  }
}

TEST(ZCounterfactual, CorridorGoldenAndAntisymmetry) {
  const auto m = corridor_at_3();
  const Event right = action_event(Action::right), left = action_event(Action::left);
  const auto zr = z_counterfactual(m, right, Baseline::uniform({left}), {0, 2});
  const auto zl = z_counterfactual(m, left, Baseline::uniform({right}), {0, 2});
  EXPECT_NEAR(zr.value, -kCorridorZ, 1e-12);
  EXPECT_NEAR(zl.value, kCorridorZ, 1e-12);
  EXPECT_EQ(zr.baseline, "uniform{left}");

  // Independent check via path enumeration.
  const auto g = GridWorld::corridor(5, 0.2);
  const auto follow = Policy::always(g, Action::right);
  const double hr = oracle::entropy_of(oracle::future_law(g, {3, 0}, Action::right, follow, 2));
  const double hl = oracle::entropy_of(oracle::future_law(g, {3, 0}, Action::left, follow, 2));
  EXPECT_NEAR(zr.value, hr - hl, 1e-12);
}

TEST(ZCounterfactual, DeterministicModelIsZero) {
  const auto g = GridWorld::corridor(5, 0.0);
  GridModel m(g, {1, 0}, Policy::always(g, Action::right));
  for (const auto& e : m.event_space()) {
    std::vector<Event> rest;
    for (const auto& o : m.event_space())
      if (o.id != e.id) rest.push_back(o);
    EXPECT_EQ(z_counterfactual(m, e, Baseline::uniform(rest), {0, 3}).value, 0.0);
  }
}

TEST(ZCounterfactual, WeightedBaseline) {
  const auto chain = FiniteMarkovModel::two_state_chain(0.1, {1.0, 0.0});
  const auto z = z_counterfactual(chain, {"clamp-0", ""}, Baseline::weighted({{"randomize", ""}}, {1.0}), {0, 1});
  EXPECT_NEAR(z.value, oracle::h2(0.1) - 1.0, 1e-12);
  EXPECT_THROW(Baseline::weighted({{"randomize", ""}}, {0.5}), error);
}

TEST(ZCounterfactual, Errors) {
  const auto m = corridor_at_3();
  const Event right = action_event(Action::right);
  try {
    z_counterfactual(m, right, Baseline::uniform({right}), {0, 2});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::event_in_baseline);
  }
  try {
    Baseline::uniform({});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::empty_baseline);
  }
  try {
    z_counterfactual(m, right, Baseline::uniform({action_event(Action::up)}), {0, 2});
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::event_not_admissible);
  }
}

TEST(ClassifyEvent, SignConvention) {
  ZEstimate z;
  z.value = -0.531;
  EXPECT_EQ(classify_event(z, 0.01), EventClass::beneficial);
  z.value = 0.0;
  EXPECT_EQ(classify_event(z, 0.01), EventClass::neutral);
  z.value = 0.531;
  EXPECT_EQ(classify_event(z, 0.01), EventClass::harmful);
  z.value = 0.01;
  EXPECT_EQ(classify_event(z, 0.01), EventClass::neutral);
}

TEST(McEntropyOfBranch, Examples) {
  const auto det = FiniteMarkovModel::two_state_chain(0.0, {1.0, 0.0});
  const auto b0 = mc_entropy_of_branch(det, std::nullopt, {0, 4}, 500, 1);
  EXPECT_EQ(b0.bits, 0.0);
  EXPECT_EQ(b0.std_error, 0.0);

  const auto chain = FiniteMarkovModel::two_state_chain(0.1, {0.5, 0.5});
  const auto b1 = mc_entropy_of_branch(chain, Event{"clamp-0", ""}, {0, 1}, 100000, 2);
  EXPECT_NEAR(b1.bits, oracle::h2(0.1), 0.01);
  EXPECT_GT(b1.std_error, 0.0);
  EXPECT_LT(b1.std_error, 0.01);

  for (std::uint64_t seed = 0; seed < 20; ++seed)
    EXPECT_LE(mc_entropy_of_branch(SamplingOnlyModel{}, std::nullopt, {0, 1}, 100, seed).bits, 4.0);

  EXPECT_THROW(mc_entropy_of_branch(chain, std::nullopt, {0, 1}, 99, 1), error);
  // Same seed, same estimate.
  EXPECT_EQ(mc_entropy_of_branch(chain, std::nullopt, {0, 2}, 1000, 7).bits,
            mc_entropy_of_branch(chain, std::nullopt, {0, 2}, 1000, 7).bits);
}

TEST(RankEvents, Examples) {
  const auto m = corridor_at_3();
  const auto ranked = rank_events(m, m.event_space(), EachVsRestUniform{}, {0, 2});
  ASSERT_EQ(ranked.size(), 2u);
  EXPECT_EQ(ranked[0].event.id, "right");
  EXPECT_EQ(ranked[1].event.id, "left");
  EXPECT_NEAR(ranked[0].z.value, -kCorridorZ, 1e-12);

  const auto chain = FiniteMarkovModel::two_state_chain(0.1, {0.5, 0.5});
  const Event clamp{"clamp-0", ""};
  const auto single = rank_events(chain, {clamp}, Baseline::null_event(), {0, 1});
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].z, z_pre_post(chain, clamp, {0, 1}));

  const auto g = GridWorld::corridor(5, 0.0);
  GridModel det(g, {2, 0}, Policy::always(g, Action::left));
  const auto ties = rank_events(det, det.event_space(), EachVsRestUniform{}, {0, 2});
  std::vector<std::string> ids;
  for (const auto& r : ties) {
    EXPECT_EQ(r.z.value, 0.0);
    ids.push_back(r.event.id);
  }
  EXPECT_EQ(ids, (std::vector<std::string>{"down", "left", "right", "up"}));
}

TEST(EntropicPotentialProperties, RandomModels) {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = oracle::random_markov_model(gen, false, 24);
    const auto events = m.event_space();
    const Horizon h{0, 1 + static_cast<int>(gen() % 4)};
    const double bound = std::log2(static_cast<double>(m.states().size()));
    for (std::size_t i = 0; i < events.size(); ++i) {
      const auto pre_post = z_pre_post(m, events[i], h);
      EXPECT_NEAR(z_counterfactual(m, events[i], Baseline::null_event(), h).value, pre_post.value, 1e-12);
      EXPECT_LE(std::abs(pre_post.value), bound + 1e-12);
      const auto j = (i + 1) % events.size();
      const double ab = z_counterfactual(m, events[i], Baseline::uniform({events[j]}), h).value;
      const double ba = z_counterfactual(m, events[j], Baseline::uniform({events[i]}), h).value;
      EXPECT_NEAR(ab, -ba, 1e-12);
    }
  }
}

TEST(EntropicPotentialProperties, RankingInvariantUnderRelabeling) {
  std::mt19937_64 gen(22);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = oracle::random_markov_model(gen, false, 16);
    const auto ranked = rank_events(m, m.event_space(), EachVsRestUniform{}, {0, 2});
    // Scores do not depend on labels; only the order of exact ties may.
    auto reversed = m.event_space();
    std::reverse(reversed.begin(), reversed.end());
    const auto again = rank_events(m, reversed, EachVsRestUniform{}, {0, 2});
    ASSERT_EQ(ranked.size(), again.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      EXPECT_NEAR(ranked[i].z.value, again[i].z.value, 1e-12);
      if (i + 1 < ranked.size() && ranked[i + 1].z.value - ranked[i].z.value > 1e-9) {
        EXPECT_EQ(ranked[i].event.id, again[i].event.id);
      }
    }
  }
}

TEST(EntropicPotentialProperties, MonteCarloAgreesWithExact) {
  std::mt19937_64 gen(23);
  for (int model = 0; model < 3; ++model) {
    const auto m = oracle::random_markov_model(gen, false, 16);
    const auto e = m.event_space().front();
    const double exact = z_pre_post(m, e, {0, 2}).value;
    int within = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      const auto mc = z_pre_post(m, e, {0, 2}, {Backend::monte_carlo, 100000, derive_seed(model, trial), 200});
      EXPECT_LE(std::abs(mc.value - exact), 0.02);
      within += std::abs(mc.value - exact) <= 3 * mc.std_error;
    }
    EXPECT_GE(within, 99) << "model " << model;
  }
}

}  // namespace
}  // namespace zentropy

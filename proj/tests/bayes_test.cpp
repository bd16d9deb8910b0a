#include <gtest/gtest.h>

#include <random>

#include "zentropy/bayes.hpp"

namespace zentropy {
namespace {

// H(theta_i / 55) - log2 11 on the 11-point grid, 30-digit arithmetic.
constexpr double kElevenPointZ = -0.355788148697817304;

const QueryCandidate kFlip{"flip", {0.0}};
const QueryCandidate kNull{"null", {0.5}};

GridPosterior random_prior(std::mt19937_64& gen) {
  const std::size_t n = 2 + gen() % 40;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> grid(n), w(n);
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = (static_cast<double>(i) + u(gen) * 0.99) / static_cast<double>(n);
    s += (w[i] = u(gen) < 0.2 ? 0.0 : u(gen));
  }
  if (s == 0) {
    w[0] = 1;
    s = 1;
  }
  for (auto& x : w) x /= s;
  return {grid, w};
}

TEST(GridPosterior, Validation) {
  EXPECT_THROW(GridPosterior({0.2, 0.1}, {0.5, 0.5}), error);
  EXPECT_THROW(GridPosterior({0.1, 1.2}, {0.5, 0.5}), error);
  EXPECT_THROW(GridPosterior({0.1, 0.2}, {0.5, 0.6}), error);
  EXPECT_NO_THROW(GridPosterior::uniform(101));
}

TEST(PosteriorUpdate, Examples) {
  const auto prior = GridPosterior::uniform(11);
  const auto post = posterior_update(prior, kFlip.model, Coin::heads);
  for (std::size_t i = 0; i < 11; ++i) EXPECT_NEAR(post.belief()[i], (i / 10.0) / 5.5, 1e-15);

  const GridPosterior point({0.0, 0.3, 1.0}, {0.0, 1.0, 0.0});
  EXPECT_EQ(posterior_update(point, kFlip.model, Coin::tails).belief(), point.belief());

  const GridPosterior only_zero({0.0, 0.5}, {1.0, 0.0});
  try {
    posterior_update(only_zero, kFlip.model, Coin::heads);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::zero_evidence);
  }
}

TEST(RealizedEventPotential, Examples) {
  const auto prior = GridPosterior::uniform(11);
  EXPECT_NEAR(realized_event_potential(prior, kFlip.model, Coin::heads).value, kElevenPointZ, 1e-12);
  EXPECT_NEAR(realized_event_potential(prior, kFlip.model, Coin::tails).value, kElevenPointZ, 1e-12);
  const GridPosterior point({0.0, 0.3, 1.0}, {0.0, 1.0, 0.0});
  EXPECT_EQ(realized_event_potential(point, kFlip.model, Coin::heads).value, 0.0);
}

TEST(RealizedEventPotential, CanBePositive) {
  // Belief concentrated near theta = 0.9; a tails makes both points equally likely.
  const GridPosterior prior({0.1, 0.9}, {0.1, 0.9});
  const auto z = realized_event_potential(prior, kFlip.model, Coin::tails);
  EXPECT_NEAR(z.value, 1.0 - 0.468995593589281221, 1e-12);
  EXPECT_GT(z.value, 0.0);
}

TEST(ExpectedEventPotential, Examples) {
  const auto prior = GridPosterior::uniform(11);
  EXPECT_NEAR(expected_event_potential(prior, kFlip).value, kElevenPointZ, 1e-12);
  const GridPosterior point({0.0, 0.3, 1.0}, {0.0, 1.0, 0.0});
  EXPECT_EQ(expected_event_potential(point, kFlip).value, 0.0);
  EXPECT_NEAR(expected_event_potential(prior, kNull).value, 0.0, 1e-12);
}

TEST(MutualInformation, Examples) {
  const auto prior = GridPosterior::uniform(11);
  EXPECT_NEAR(mutual_information(prior, kNull), 0.0, 1e-15);
  EXPECT_NEAR(mutual_information(prior, kFlip), -kElevenPointZ, 1e-12);
  const GridPosterior reveal({0.0, 1.0}, {0.3, 0.7});
  EXPECT_NEAR(mutual_information(reveal, kFlip), reveal.entropy(), 1e-12);
}

TEST(RankQueries, Examples) {
  const auto prior = GridPosterior::uniform(11);
  auto ranked = rank_queries(prior, {kNull, kFlip});
  EXPECT_EQ(ranked[0].query.id, "flip");
  EXPECT_EQ(ranked[1].query.id, "null");

  ranked = rank_queries(prior, {{"b", {0.1}}, {"a", {0.1}}});
  EXPECT_EQ(ranked[0].query.id, "a");
  EXPECT_EQ(ranked[1].query.id, "b");

  ranked = rank_queries(prior, {kFlip});
  ASSERT_EQ(ranked.size(), 1u);
  EXPECT_EQ(ranked[0].query.id, "flip");
  EXPECT_THROW(rank_queries(prior, {}), error);
}

TEST(BayesProperties, ExpectedZIsMinusMutualInformation) {
  std::mt19937_64 gen(41);
  std::uniform_real_distribution<double> noise(0.0, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const auto prior = random_prior(gen);
    const QueryCandidate q{"q", {noise(gen)}};
    const double z = expected_event_potential(prior, q).value;
    EXPECT_NEAR(z, -mutual_information(prior, q), 1e-9);
    EXPECT_LE(z, 1e-12);
  }
}

TEST(BayesProperties, MartingaleRecoversPrior) {
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> noise(0.0, 0.5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto prior = random_prior(gen);
    const ObservationModel m{noise(gen)};
    std::vector<double> mixed(prior.size(), 0.0);
    for (auto o : kCoinOutcomes) {
      const double po = prior.predictive(m, o);
      if (po == 0.0) continue;
      const auto post = posterior_update(prior, m, o);
      for (std::size_t i = 0; i < mixed.size(); ++i) mixed[i] += po * post.belief()[i];
    }
    for (std::size_t i = 0; i < mixed.size(); ++i) EXPECT_NEAR(mixed[i], prior.belief()[i], 1e-12);
  }
}

// Refinement is reported, not asserted monotone: doubling the grid moves the
// expected Z of one flip by a bounded amount.
TEST(BayesProperties, GridRefinementBounded) {
  double prev = expected_event_potential(GridPosterior::uniform(11), kFlip).value;
  for (std::size_t n : {21u, 41u, 81u, 161u}) {
    const double z = expected_event_potential(GridPosterior::uniform(n), kFlip).value;
    EXPECT_LT(std::abs(z - prev), 0.05) << n;
    prev = z;
  }
}

}  // namespace
}  // namespace zentropy
